#include "bb84/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>

#include "bb84/information.hpp"

namespace bb84 {
namespace {

bool coin(std::uint64_t seed, std::size_t qubit, DrawRole role) {
  RandomSource rng(seed, qubit_stream(qubit, role));
  return (rng() >> 63) != 0;
}

Basis draw_basis(std::uint64_t seed, std::size_t qubit, DrawRole role) {
  return coin(seed, qubit, role) ? Basis::X : Basis::Z;
}

Bit measure_with(const PureState<double>& state, Basis basis, std::uint64_t seed, std::size_t qubit,
                 DrawRole role) {
  RandomSource rng(seed, qubit_stream(qubit, role));
  return measure(state, basis, rng);
}

QubitRecord simulate_qubit(const ProtocolConfig& config, std::size_t q) {
  const Scenario& sc = config.scenario;
  QubitRecord rec;
  rec.alice_bit = coin(config.seed, q, DrawRole::alice_bit) ? Bit::one : Bit::zero;
  rec.alice_basis = draw_basis(config.seed, q, DrawRole::alice_basis);

  PureState<double> state = apply_rotation(encode(rec.alice_bit, rec.alice_basis),
                                           sc.first_segment_angle());
  if (sc.eve_present()) {
    const Basis eve_basis = draw_basis(config.seed, q, DrawRole::eve_basis);
    const Bit eve_bit = measure_with(state, eve_basis, config.seed, q, DrawRole::eve_outcome);
    rec.eve_symbol = symbol_of(eve_bit, eve_basis);
    // Eve re-sends the ideal symbol she observed.
    state = apply_rotation(encode(*rec.eve_symbol), sc.second_segment_angle());
  }

  rec.bob_basis = draw_basis(config.seed, q, DrawRole::bob_basis);
  rec.bob_bit = measure_with(state, rec.bob_basis, config.seed, q, DrawRole::bob_outcome);
  return rec;
}

}  // namespace

void ProtocolConfig::validate() const {
  if (n_qubits < 1) throw std::invalid_argument("n_qubits must be at least 1");
  if (!(estimation_fraction > 0.0 && estimation_fraction < 1.0)) {
    throw std::invalid_argument("estimation_fraction must lie in (0, 1)");
  }
  if (!(abort_threshold > 0.0 && abort_threshold < 1.0)) {
    throw std::invalid_argument("abort_threshold must lie in (0, 1)");
  }
  if (!std::isfinite(scenario.theta) || !std::isfinite(scenario.phi)) {
    throw std::invalid_argument("scenario angles must be finite");
  }
}

double Transcript::qber_standard_error() const {
  const auto m = static_cast<double>(disclosed_indices.size());
  if (m == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(qber_estimate * (1.0 - qber_estimate) / m);
}

std::vector<std::size_t> sift(std::span<const Basis> alice_bases, std::span<const Basis> bob_bases) {
  if (alice_bases.size() != bob_bases.size()) {
    throw std::invalid_argument("sift: basis lists differ in length");
  }
  std::vector<std::size_t> kept;
  kept.reserve(alice_bases.size() / 2 + 1);
  for (std::size_t i = 0; i < alice_bases.size(); ++i) {
    if (alice_bases[i] == bob_bases[i]) kept.push_back(i);
  }
  return kept;
}

Estimate estimate_and_decide(Transcript& t, double fraction, double threshold, RandomSource& rng) {
  const std::size_t n_sifted = t.sifted_indices.size();
  if (n_sifted == 0) throw std::invalid_argument("estimate_and_decide: sifted set is empty");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("estimate_and_decide: fraction must lie in (0, 1]");
  }

  // The small offset keeps products such as 0.2 * 5 from rounding up past an integer.
  auto m = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n_sifted) - 1e-9));
  m = std::clamp<std::size_t>(m, 1, n_sifted);

  // Partial Fisher-Yates over the sifted positions.
  std::vector<std::size_t> pool = t.sifted_indices;
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n_sifted - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  t.disclosed_indices = std::move(pool);

  t.disclosed_errors = 0;
  for (std::size_t i : t.disclosed_indices) {
    if (t.records[i].alice_bit != t.records[i].bob_bit) ++t.disclosed_errors;
  }
  t.qber_estimate = static_cast<double>(t.disclosed_errors) / static_cast<double>(m);
  t.aborted = t.qber_estimate > threshold;

  t.sifted_key_alice.clear();
  t.sifted_key_bob.clear();
  auto next_disclosed = t.disclosed_indices.begin();
  for (std::size_t i : t.sifted_indices) {
    if (next_disclosed != t.disclosed_indices.end() && *next_disclosed == i) {
      ++next_disclosed;
      continue;
    }
    t.sifted_key_alice.push_back(t.records[i].alice_bit);
    t.sifted_key_bob.push_back(t.records[i].bob_bit);
  }
  return {t.qber_estimate, t.aborted};
}

Transcript run_bb84(const ProtocolConfig& config) {
  config.validate();
  Transcript t;
  t.config = config;
  t.records.resize(config.n_qubits);
  for (std::size_t q = 0; q < config.n_qubits; ++q) t.records[q] = simulate_qubit(config, q);

  std::vector<Basis> alice(config.n_qubits), bob(config.n_qubits);
  std::transform(t.records.begin(), t.records.end(), alice.begin(),
                 [](const QubitRecord& r) { return r.alice_basis; });
  std::transform(t.records.begin(), t.records.end(), bob.begin(),
                 [](const QubitRecord& r) { return r.bob_basis; });
  t.sifted_indices = sift(alice, bob);

  if (t.sifted_indices.empty()) {
    t.qber_estimate = std::numeric_limits<double>::quiet_NaN();
    t.aborted = true;
    return t;
  }
  RandomSource estimation(config.seed, kEstimationStream);
  estimate_and_decide(t, config.estimation_fraction, config.abort_threshold, estimation);
  return t;
}

Eigen::Matrix4d empirical_joint_alice_eve(const Transcript& t) {
  if (!t.config.scenario.eve_present()) {
    throw std::invalid_argument("empirical_joint_alice_eve: no eavesdropper in this scenario");
  }
  Eigen::Matrix4d counts = Eigen::Matrix4d::Zero();
  for (const QubitRecord& r : t.records) {
    counts(index_of(r.alice_symbol()), index_of(*r.eve_symbol)) += 1.0;
  }
  return counts / static_cast<double>(t.records.size());
}

double empirical_mutual_information(const Transcript& t) {
  return mutual_information_from_joint(empirical_joint_alice_eve(t));
}

}  // namespace bb84
