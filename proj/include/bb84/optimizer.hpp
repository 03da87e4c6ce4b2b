// Parameter sweeps over the channel noise and the search for the noise level
// that minimizes the eavesdropper's information.

#ifndef BB84_OPTIMIZER_HPP
#define BB84_OPTIMIZER_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "bb84/security.hpp"

namespace bb84 {

enum class SweepParameter { theta, epsilon };

enum class Quantity { qber_q0, qber_q1, qber_q2, mi_ae, skr_q0, skr_q1, skr_q2 };

std::string_view quantity_name(Quantity q) noexcept;
Quantity parse_quantity(std::string_view name);
std::string_view parameter_name(SweepParameter p) noexcept;

/// Scenario family a quantity is evaluated on at noise angle theta:
/// q0 -> noise only, q1 and mi_ae -> full attack with equal noise on both
/// segments, q2 -> Eve at Alice's output.
Scenario scenario_for(Quantity q, double theta);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::theta;
  double start = 0.0;
  double stop = 1.0;
  std::size_t points = 2;
  Quantity quantity = Quantity::qber_q0;
  EqualNoiseForm q1_form = EqualNoiseForm::matrix_product;

  void validate() const;
};

/// Uniform grid, ascending in the swept parameter. For epsilon sweeps the
/// points carry the exact grid epsilon and theta = asin(sqrt(epsilon)).
std::vector<SecurityPoint> sweep(const SweepSpec& spec);

double quantity_value(const SecurityPoint& point, Quantity q) noexcept;

/// Golden-section minimization of a unimodal function on [lo, hi]; stops
/// when the bracket is narrower than `tol`.
template <typename F>
double golden_section_minimize(F&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

struct Optimum {
  double epsilon_star = 0.0;
  double theta_star = 0.0;  // asin(sqrt(epsilon_star))
  double i_min = 0.0;
  double i_at_zero = 0.0;
  double reduction_fraction = 0.0;  // (i_at_zero - i_min) / i_at_zero
  double skr_at_star = 0.0;         // noise-only rate at Q0 = epsilon_star
  double skr_max = 0.0;
};

inline constexpr double kRefinementTolerance = 1e-7;

/// Coarse grid of `resolution` points on [lo, hi] followed by golden-section
/// refinement of the Alice-Eve information in epsilon.
Optimum minimize_eve_information(std::size_t resolution, double lo = 0.0, double hi = 0.5);

struct TradeoffRow {
  ScenarioKind scenario = ScenarioKind::noise_only;
  double skr_at_zero = 0.0;
  double skr_at_star = 0.0;
  double absolute_penalty = 0.0;
  double relative_penalty = 0.0;
  double skr_at_reference = 0.0;
};

struct TradeoffReport {
  Optimum optimum;
  double reference_epsilon = 0.0;
  std::vector<TradeoffRow> rows;  // noise-only, full attack, near-Alice
};

/// Key rate of each scenario at zero noise, at the optimum and at a fixed
/// reference noise level.
TradeoffReport skr_tradeoff_report(const Optimum& optimum, double reference_epsilon = 0.13);

}  // namespace bb84

#endif  // BB84_OPTIMIZER_HPP
