#include "bb84/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "bb84/information.hpp"
#include "bb84/protocol.hpp"
#include "bb84/security.hpp"

namespace bb84 {
namespace {

constexpr double kExact = 1e-12;
constexpr double kSigmas = 3.0;
constexpr double kHalfPi = std::numbers::pi / 2.0;

std::vector<double> grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return g;
}

// Open interval (lo, hi) with n interior points.
std::vector<double> interior_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(n + 1);
  }
  return g;
}

CheckResult exact_check(std::string name, std::string kind, double deviation, double tol) {
  return {std::move(name), std::move(kind), deviation, tol, deviation <= tol, {}};
}

template <typename F>
double max_over(const std::vector<double>& xs, F&& deviation) {
  double worst = 0.0;
  for (double x : xs) worst = std::max(worst, deviation(x));
  return worst;
}

// Simulated QBER over a grid of angles; passes when at most one point falls
// outside 3 binomial standard errors.
CheckResult montecarlo_grid(const std::string& name, const VerifyOptions& opt,
                            const std::function<Scenario(double)>& make_scenario,
                            const std::function<double(double)>& analytic, double hi) {
  const auto angles = grid(0.0, hi, opt.mc_grid_points);
  std::size_t within = 0;
  double worst_z = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    ProtocolConfig cfg;
    cfg.n_qubits = opt.mc_qubits;
    cfg.scenario = make_scenario(angles[i]);
    cfg.seed = opt.seed + i;
    const Transcript t = run_bb84(cfg);
    const double z = binomial_z(t.qber_estimate, analytic(angles[i]), t.disclosed_indices.size());
    worst_z = std::max(worst_z, z);
    if (z <= kSigmas) ++within;
  }
  CheckResult r{name, "montecarlo", worst_z, kSigmas, within + 1 >= angles.size(), {}};
  std::ostringstream detail;
  detail << within << "/" << angles.size() << " grid points within 3 sigma";
  r.detail = detail.str();
  return r;
}

}  // namespace

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

double binomial_z(double p_hat, double p, std::size_t m) {
  if (m == 0 || !std::isfinite(p_hat)) return std::numeric_limits<double>::infinity();
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(m));
  const double diff = std::abs(p_hat - p);
  if (se == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / se;
}

VerificationReport run_verification(const VerifyOptions& opt) {
  VerificationReport rep;
  const auto angles100 = grid(0.0, kHalfPi, 100);
  const auto angles50 = grid(0.0, kHalfPi, 50);

  rep.checks.push_back(exact_check(
      "transition_matrix_vs_measurement_oracle", "oracle",
      max_over(angles100,
               [](double t) {
                 return (p_eve_given_alice(t) - intercept_resend_transition_oracle(t))
                     .cwiseAbs()
                     .maxCoeff();
               }),
      kExact));

  rep.checks.push_back(exact_check(
      "transition_matrix_row_sums", "oracle",
      max_over(angles100,
               [](double t) {
                 return (p_eve_given_alice(t).rowwise().sum().array() - 1.0).abs().maxCoeff();
               }),
      kExact));

  double full_dev = 0.0;
  for (double t : angles50) {
    for (double f : angles50) {
      const double oracle = qber_from_joint(joint_alice_bob(Scenario::full_channel_attack(t, f)));
      full_dev = std::max(full_dev, std::abs(qber_full_attack(t, f) - oracle));
    }
  }
  rep.checks.push_back(exact_check("full_attack_qber_vs_matrix_product", "oracle", full_dev, kExact));

  rep.checks.push_back(exact_check(
      "equal_noise_qber_vs_matrix_product", "oracle",
      max_over(angles100,
               [](double t) {
                 return std::abs(qber_equal_noise(t) -
                                 qber_from_joint(joint_alice_bob(Scenario::full_channel_attack(t, t))));
               }),
      kExact));

  rep.checks.push_back(exact_check(
      "printed_equal_noise_gap_is_sin2_2theta_over_4", "oracle",
      max_over(angles100,
               [](double t) {
                 const double s = std::sin(2.0 * t);
                 const double gap = qber_equal_noise(t) - qber_equal_noise(t, EqualNoiseForm::as_printed);
                 return std::abs(gap - s * s / 4.0);
               }),
      kExact));

  rep.checks.push_back(exact_check(
      "near_alice_qber_vs_matrix_product", "oracle",
      max_over(angles100,
               [](double f) {
                 return std::abs(qber_near_alice(f) -
                                 qber_from_joint(joint_alice_bob(Scenario::near_alice_attack(f))));
               }),
      kExact));

  rep.checks.push_back(exact_check(
      "near_alice_joint_entries", "oracle",
      max_over(angles100,
               [](double f) {
                 const auto e = near_alice_entries(f);
                 Eigen::Matrix4d pattern;
                 pattern << e.a, e.b, e.c, e.d,
                            e.b, e.a, e.d, e.c,
                            e.d, e.c, e.a, e.b,
                            e.c, e.d, e.b, e.a;
                 return (joint_alice_bob(Scenario::near_alice_attack(f)) - pattern).cwiseAbs().maxCoeff();
               }),
      kExact));

  rep.checks.push_back(exact_check(
      "alice_eve_joint_vs_bayes", "oracle",
      max_over(angles100,
               [](double t) {
                 return (joint_alice_eve(t) - p_eve_given_alice(t) / 4.0).cwiseAbs().maxCoeff();
               }),
      kExact));

  rep.checks.push_back(exact_check(
      "mutual_information_closed_form_vs_joint_entropy", "oracle",
      max_over(interior_grid(0.0, std::numbers::pi / 4.0, 100),
               [](double t) {
                 return std::abs(mutual_information_ae(bit_flip_probability(t)) -
                                 mutual_information_from_joint(joint_alice_eve(t)));
               }),
      kExact));

  rep.checks.push_back(exact_check(
      "mutual_information_endpoints", "anchor",
      std::max(std::abs(mutual_information_ae(0.0) - 0.5), std::abs(mutual_information_ae(0.5) - 0.5)),
      kExact));

  rep.checks.push_back(exact_check("intercept_resend_floor", "anchor",
                                   std::abs(qber_full_attack(0.0, 0.0) - 0.25), kExact));

  if (opt.montecarlo) {
    rep.checks.push_back(montecarlo_grid(
        "montecarlo_noise_only_qber", opt, [](double t) { return Scenario::noise_only(t); },
        [](double t) { return qber_noise_only(t); }, kHalfPi));
    rep.checks.push_back(montecarlo_grid(
        "montecarlo_equal_noise_attack_qber", opt,
        [](double t) { return Scenario::full_channel_attack(t, t); },
        [](double t) { return qber_equal_noise(t); }, kHalfPi));
    rep.checks.push_back(montecarlo_grid(
        "montecarlo_near_alice_qber", opt, [](double f) { return Scenario::near_alice_attack(f); },
        [](double f) { return qber_near_alice(f); }, kHalfPi));

    ProtocolConfig cfg;
    cfg.n_qubits = opt.mc_qubits;
    cfg.seed = opt.seed;
    cfg.scenario = Scenario::full_channel_attack(std::asin(std::sqrt(0.13)), 0.0);
    const Transcript t = run_bb84(cfg);
    const double mi_dev =
        std::abs(empirical_mutual_information(t) - mutual_information_ae(0.13));
    CheckResult mi = exact_check("montecarlo_alice_eve_information", "montecarlo", mi_dev, 0.01);
    mi.detail = "epsilon = 0.13, plug-in estimate";
    rep.checks.push_back(mi);
  }

  const double t45 = std::numbers::pi / 4.0;
  rep.divergences.push_back(
      {"equal_noise_qber", "theta", t45, qber_equal_noise(t45, EqualNoiseForm::as_printed),
       qber_equal_noise(t45)});
  rep.divergences.push_back({"alice_eve_information", "epsilon", 0.13,
                             mutual_information_ae_as_printed(0.13), mutual_information_ae(0.13)});
  return rep;
}

}  // namespace bb84
