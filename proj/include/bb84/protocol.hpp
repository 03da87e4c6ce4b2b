// Monte Carlo BB84: preparation, collective rotation noise, optional
// intercept-resend eavesdropping, measurement, sifting and parameter
// estimation with an abort decision.

#ifndef BB84_PROTOCOL_HPP
#define BB84_PROTOCOL_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bb84/quantum.hpp"
#include "bb84/random.hpp"
#include "bb84/security.hpp"

namespace bb84 {

struct ProtocolConfig {
  std::size_t n_qubits = 10000;
  Scenario scenario;
  std::uint64_t seed = 0;
  double estimation_fraction = 0.2;  // share of sifted bits disclosed
  double abort_threshold = 0.11;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct QubitRecord {
  Bit alice_bit = Bit::zero;
  Basis alice_basis = Basis::Z;
  std::optional<Symbol> eve_symbol;  // what Eve observed and re-sent
  Basis bob_basis = Basis::Z;
  Bit bob_bit = Bit::zero;

  [[nodiscard]] Symbol alice_symbol() const noexcept { return symbol_of(alice_bit, alice_basis); }
};

struct Transcript {
  ProtocolConfig config;
  std::vector<QubitRecord> records;
  std::vector<std::size_t> sifted_indices;     // ascending
  std::vector<std::size_t> disclosed_indices;  // ascending, subset of sifted
  std::size_t disclosed_errors = 0;
  /// Disagreement rate over the disclosed bits. NaN when nothing was sifted.
  double qber_estimate = 0.0;
  bool aborted = false;
  std::vector<Bit> sifted_key_alice;  // sifted minus disclosed
  std::vector<Bit> sifted_key_bob;

  /// Binomial standard error of qber_estimate.
  [[nodiscard]] double qber_standard_error() const;
};

struct Estimate {
  double qber = 0.0;
  bool aborted = false;
};

/// Stream ids used by run_bb84. Each (qubit, role) draws from its own stream.
enum class DrawRole : std::uint64_t {
  alice_bit = 0,
  alice_basis = 1,
  eve_basis = 2,
  eve_outcome = 3,
  bob_basis = 4,
  bob_outcome = 5,
};

constexpr std::uint64_t qubit_stream(std::size_t qubit, DrawRole role) noexcept {
  return static_cast<std::uint64_t>(qubit) * 8U + static_cast<std::uint64_t>(role);
}

inline constexpr std::uint64_t kEstimationStream = ~std::uint64_t{0};

Transcript run_bb84(const ProtocolConfig& config);

/// Ascending positions where the bases agree. Throws on length mismatch.
std::vector<std::size_t> sift(std::span<const Basis> alice_bases, std::span<const Basis> bob_bases);

/// Discloses ceil(fraction * |sifted|) sifted positions drawn without
/// replacement, estimates the error rate there and fills the disclosure
/// fields and final keys of `transcript`. Requires records and
/// sifted_indices to be populated; throws std::invalid_argument when the
/// sifted set is empty.
Estimate estimate_and_decide(Transcript& transcript, double fraction, double threshold,
                             RandomSource& rng);

/// Normalized (Alice symbol, Eve outcome) frequencies over all rounds.
/// Throws std::invalid_argument when Eve is absent.
Eigen::Matrix4d empirical_joint_alice_eve(const Transcript& transcript);

double empirical_mutual_information(const Transcript& transcript);

/// One line per qubit:
///   index,alice_bit,alice_basis,eve_symbol|-,bob_basis,bob_bit,sifted,disclosed
/// preceded by '#' comment lines carrying the format version and field names.
void write_transcript(std::ostream& out, const Transcript& transcript);

struct TranscriptRow {
  std::size_t index = 0;
  QubitRecord record;
  bool sifted = false;
  bool disclosed = false;
};

/// Parses the format produced by write_transcript. Throws std::runtime_error
/// on malformed lines.
std::vector<TranscriptRow> read_transcript(std::istream& in);

}  // namespace bb84

#endif  // BB84_PROTOCOL_HPP
