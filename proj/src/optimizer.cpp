#include "bb84/optimizer.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <string>

#include "bb84/information.hpp"

namespace bb84 {
namespace {

constexpr std::array<Quantity, 7> kQuantities{Quantity::qber_q0, Quantity::qber_q1,
                                              Quantity::qber_q2, Quantity::mi_ae,
                                              Quantity::skr_q0,  Quantity::skr_q1,
                                              Quantity::skr_q2};

// Admits rounded literals such as 1.5708 for pi/2.
constexpr double kAngleSlack = 1e-4;

double theta_of_epsilon(double eps) { return std::asin(std::sqrt(std::clamp(eps, 0.0, 1.0))); }

}  // namespace

std::string_view quantity_name(Quantity q) noexcept {
  switch (q) {
    case Quantity::qber_q0: return "qber_q0";
    case Quantity::qber_q1: return "qber_q1";
    case Quantity::qber_q2: return "qber_q2";
    case Quantity::mi_ae: return "mi_ae";
    case Quantity::skr_q0: return "skr_q0";
    case Quantity::skr_q1: return "skr_q1";
    case Quantity::skr_q2: return "skr_q2";
  }
  return "unknown";
}

Quantity parse_quantity(std::string_view name) {
  for (Quantity q : kQuantities) {
    if (quantity_name(q) == name) return q;
  }
  throw std::invalid_argument("unknown quantity '" + std::string(name) + "'");
}

std::string_view parameter_name(SweepParameter p) noexcept {
  return p == SweepParameter::theta ? "theta" : "epsilon";
}

Scenario scenario_for(Quantity q, double theta) {
  switch (q) {
    case Quantity::qber_q0:
    case Quantity::skr_q0: return Scenario::noise_only(theta);
    case Quantity::qber_q1:
    case Quantity::skr_q1:
    case Quantity::mi_ae: return Scenario::full_channel_attack(theta, theta);
    case Quantity::qber_q2:
    case Quantity::skr_q2: return Scenario::near_alice_attack(theta);
  }
  throw std::invalid_argument("unknown quantity");
}

void SweepSpec::validate() const {
  if (points < 2) throw std::invalid_argument("sweep needs at least 2 points");
  if (!std::isfinite(start) || !std::isfinite(stop) || !(start < stop)) {
    throw std::invalid_argument("sweep range must satisfy start < stop");
  }
  const double upper =
      parameter == SweepParameter::theta ? std::numbers::pi / 2.0 + kAngleSlack : 1.0;
  if (start < 0.0 || stop > upper) {
    throw std::invalid_argument(parameter == SweepParameter::theta
                                    ? "theta range must lie within [0, pi/2]"
                                    : "epsilon range must lie within [0, 1]");
  }
}

std::vector<SecurityPoint> sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<SecurityPoint> out;
  out.reserve(spec.points);
  const double step = (spec.stop - spec.start) / static_cast<double>(spec.points - 1);
  for (std::size_t i = 0; i < spec.points; ++i) {
    const double x = i + 1 == spec.points ? spec.stop : spec.start + step * static_cast<double>(i);
    if (spec.parameter == SweepParameter::theta) {
      out.push_back(security_point(scenario_for(spec.quantity, x), spec.q1_form));
      continue;
    }
    SecurityPoint pt = security_point(scenario_for(spec.quantity, theta_of_epsilon(x)), spec.q1_form);
    pt.epsilon = x;
    if (pt.scenario.kind == ScenarioKind::full_channel_attack) {
      pt.i_ae = mutual_information_ae(x);
      pt.devetak_winter_raw = devetak_winter_bound_raw(pt.i_ab, pt.i_ae);
      pt.devetak_winter = devetak_winter_bound(pt.i_ab, pt.i_ae);
    }
    out.push_back(pt);
  }
  return out;
}

double quantity_value(const SecurityPoint& point, Quantity q) noexcept {
  switch (q) {
    case Quantity::qber_q0:
    case Quantity::qber_q1:
    case Quantity::qber_q2: return point.qber;
    case Quantity::mi_ae: return point.i_ae;
    case Quantity::skr_q0:
    case Quantity::skr_q1:
    case Quantity::skr_q2: return point.skr;
  }
  return 0.0;
}

Optimum minimize_eve_information(std::size_t resolution, double lo, double hi) {
  if (resolution < 100) throw std::invalid_argument("resolution must be at least 100");
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) {
    throw std::invalid_argument("search interval must lie within [0, 1]");
  }

  const double step = (hi - lo) / static_cast<double>(resolution - 1);
  std::size_t best = 0;
  double best_value = mutual_information_ae(lo);
  for (std::size_t i = 1; i < resolution; ++i) {
    const double v = mutual_information_ae(std::min(hi, lo + step * static_cast<double>(i)));
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }

  const double a = std::max(lo, lo + step * (static_cast<double>(best) - 1.0));
  const double b = std::min(hi, lo + step * (static_cast<double>(best) + 1.0));
  const double eps = golden_section_minimize(mutual_information_ae, a, b, kRefinementTolerance);

  Optimum o;
  o.epsilon_star = eps;
  o.theta_star = theta_of_epsilon(eps);
  o.i_min = mutual_information_ae(eps);
  o.i_at_zero = mutual_information_ae(0.0);
  o.reduction_fraction = (o.i_at_zero - o.i_min) / o.i_at_zero;
  o.skr_at_star = skr_shor_preskill(eps);
  o.skr_max = skr_shor_preskill(0.0);
  return o;
}

TradeoffReport skr_tradeoff_report(const Optimum& optimum, double reference_epsilon) {
  if (!(reference_epsilon >= 0.0 && reference_epsilon <= 1.0)) {
    throw std::invalid_argument("reference epsilon must lie in [0, 1]");
  }
  TradeoffReport report;
  report.optimum = optimum;
  report.reference_epsilon = reference_epsilon;
  const double theta_ref = theta_of_epsilon(reference_epsilon);

  for (Quantity q : {Quantity::skr_q0, Quantity::skr_q1, Quantity::skr_q2}) {
    TradeoffRow row;
    row.scenario = scenario_for(q, 0.0).kind;
    row.skr_at_zero = security_point(scenario_for(q, 0.0)).skr;
    row.skr_at_star = security_point(scenario_for(q, optimum.theta_star)).skr;
    row.skr_at_reference = security_point(scenario_for(q, theta_ref)).skr;
    if (q == Quantity::skr_q0) {
      // Q0 = epsilon exactly; skip the asin/sin round trip.
      row.skr_at_star = skr_shor_preskill(optimum.epsilon_star);
      row.skr_at_reference = skr_shor_preskill(reference_epsilon);
    }
    row.absolute_penalty = row.skr_at_zero - row.skr_at_star;
    row.relative_penalty = row.skr_at_zero > 0.0 ? row.absolute_penalty / row.skr_at_zero : 0.0;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace bb84
