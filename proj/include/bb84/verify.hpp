// Formula-versus-oracle verification: closed forms against matrix products,
// measurement-built transition matrices and joint-entropy computations, and
// analytic error rates against Monte Carlo runs.

#ifndef BB84_VERIFY_HPP
#define BB84_VERIFY_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bb84 {

struct CheckResult {
  std::string name;
  std::string kind;  // "oracle", "anchor" or "montecarlo"
  double max_deviation = 0.0;
  double tolerance = 0.0;  // absolute, or z-score bound for Monte Carlo checks
  bool passed = false;
  std::string detail;
};

/// A closed form that is known to disagree with its consistent counterpart.
struct ExpectedDivergence {
  std::string name;
  std::string parameter;  // e.g. "theta" or "epsilon"
  double at = 0.0;
  double as_printed = 0.0;
  double consistent = 0.0;
};

struct VerifyOptions {
  bool montecarlo = true;
  std::uint64_t seed = 20240917;
  std::size_t mc_qubits = 100000;
  std::size_t mc_grid_points = 20;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  std::vector<ExpectedDivergence> divergences;

  [[nodiscard]] bool all_passed() const;
};

VerificationReport run_verification(const VerifyOptions& options);

/// z-score of a binomial estimate p_hat from m trials against p. A zero
/// standard error gives 0 on an exact match and infinity otherwise.
double binomial_z(double p_hat, double p, std::size_t m);

}  // namespace bb84

#endif  // BB84_VERIFY_HPP
