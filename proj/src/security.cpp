#include "bb84/security.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bb84/information.hpp"

namespace bb84 {
namespace {

void require_finite(double angle) {
  if (!std::isfinite(angle)) throw std::invalid_argument("channel angle must be finite");
}

}  // namespace

Scenario Scenario::noise_only(double theta) {
  require_finite(theta);
  return {ScenarioKind::noise_only, theta, 0.0};
}

Scenario Scenario::full_channel_attack(double theta, double phi) {
  require_finite(theta);
  require_finite(phi);
  return {ScenarioKind::full_channel_attack, theta, phi};
}

Scenario Scenario::near_alice_attack(double phi) {
  require_finite(phi);
  return {ScenarioKind::near_alice_attack, 0.0, phi};
}

std::string_view scenario_name(ScenarioKind kind) noexcept {
  switch (kind) {
    case ScenarioKind::noise_only: return "noise-only";
    case ScenarioKind::full_channel_attack: return "full-attack";
    case ScenarioKind::near_alice_attack: return "near-alice";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
  for (auto kind : {ScenarioKind::noise_only, ScenarioKind::full_channel_attack,
                    ScenarioKind::near_alice_attack}) {
    if (scenario_name(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

SecurityPoint security_point(const Scenario& scenario, EqualNoiseForm form) {
  SecurityPoint pt;
  pt.scenario = scenario;
  switch (scenario.kind) {
    case ScenarioKind::noise_only:
      pt.theta = scenario.theta;
      pt.qber = qber_noise_only(scenario.theta);
      pt.i_ae = 0.0;
      break;
    case ScenarioKind::full_channel_attack:
      pt.theta = scenario.theta;
      pt.qber = scenario.theta == scenario.phi ? qber_equal_noise(scenario.theta, form)
                                               : qber_full_attack(scenario.theta, scenario.phi);
      pt.i_ae = mutual_information_ae(bit_flip_probability(scenario.theta));
      break;
    case ScenarioKind::near_alice_attack:
      pt.theta = scenario.phi;
      pt.qber = qber_near_alice(scenario.phi);
      pt.i_ae = mutual_information_ae(0.0);
      break;
  }
  pt.epsilon = bit_flip_probability(pt.theta);
  pt.i_ab = mutual_information_ab(pt.qber);
  pt.skr = skr_shor_preskill(pt.qber);
  pt.devetak_winter_raw = devetak_winter_bound_raw(pt.i_ab, pt.i_ae);
  pt.devetak_winter = std::max(0.0, pt.devetak_winter_raw);
  return pt;
}

}  // namespace bb84
