// Closed-form security quantities for BB84 under collective rotation noise
// with an intercept-resend eavesdropper.
//
// Transition matrices are row-stochastic 4x4 matrices indexed by
// (input symbol, output symbol). Joint distributions are 4x4 matrices whose
// sixteen entries sum to one. Both use the canonical symbol order of
// quantum.hpp.

#ifndef BB84_SECURITY_HPP
#define BB84_SECURITY_HPP

#include <cmath>
#include <stdexcept>
#include <string_view>

#include <Eigen/Dense>

#include "bb84/quantum.hpp"

namespace bb84 {

template <typename Scalar>
using TransitionMatrix = Eigen::Matrix<Scalar, 4, 4>;

template <typename Scalar>
using JointDistribution = Eigen::Matrix<Scalar, 4, 4>;

enum class ScenarioKind { noise_only, full_channel_attack, near_alice_attack };

/// Which channel segments carry rotation noise and whether Eve intercepts.
/// `theta` is the Alice->Eve (or Alice->Bob) angle, `phi` the Eve->Bob angle.
struct Scenario {
  ScenarioKind kind = ScenarioKind::noise_only;
  double theta = 0.0;
  double phi = 0.0;

  static Scenario noise_only(double theta);
  static Scenario full_channel_attack(double theta, double phi);
  /// Eve sits at Alice's output: the segment before her is noiseless.
  static Scenario near_alice_attack(double phi);

  [[nodiscard]] bool eve_present() const noexcept { return kind != ScenarioKind::noise_only; }
  /// Rotation applied before Eve (or before Bob when Eve is absent).
  [[nodiscard]] double first_segment_angle() const noexcept { return theta; }
  /// Rotation applied between Eve and Bob; zero when Eve is absent.
  [[nodiscard]] double second_segment_angle() const noexcept { return phi; }
};

std::string_view scenario_name(ScenarioKind kind) noexcept;
ScenarioKind parse_scenario_kind(std::string_view name);

/// Which closed form to report for the equal-noise full attack. The printed
/// variant (1 + sin^2 2t)/4 understates the matrix-product value
/// (1 + 2 sin^2 2t)/4 by sin^2(2t)/4 and is kept for figure comparison only.
enum class EqualNoiseForm { matrix_product, as_printed };

template <typename Scalar>
Scalar qber_noise_only(Scalar theta) {
  return bit_flip_probability(theta);
}

/// P(E|A): Eve measures the rotated state in a uniformly random basis.
template <typename Scalar>
TransitionMatrix<Scalar> p_eve_given_alice(Scalar theta) {
  using std::cos;
  using std::sin;
  const Scalar c2 = cos(theta) * cos(theta) / Scalar(2);
  const Scalar s2 = sin(theta) * sin(theta) / Scalar(2);
  const Scalar lo = (Scalar(1) - sin(Scalar(2) * theta)) / Scalar(4);
  const Scalar hi = (sin(Scalar(2) * theta) + Scalar(1)) / Scalar(4);
  TransitionMatrix<Scalar> m;
  m << c2, s2, lo, hi,
       s2, c2, hi, lo,
       hi, lo, c2, s2,
       lo, hi, s2, c2;
  return m;
}

/// P(B|E): same functional form with the Eve->Bob angle.
template <typename Scalar>
TransitionMatrix<Scalar> p_bob_given_eve(Scalar phi) {
  return p_eve_given_alice(phi);
}

/// Builds P(E|A) from state vectors and Born-rule overlaps rather than the
/// closed form: entry (a, e) = 1/2 |<e|U(theta)|a>|^2.
template <typename Scalar>
TransitionMatrix<Scalar> intercept_resend_transition_oracle(Scalar theta) {
  TransitionMatrix<Scalar> m;
  for (Symbol a : kSymbols) {
    const PureState<Scalar> rotated = apply_rotation(encode<Scalar>(a), theta);
    for (Symbol e : kSymbols) {
      // Eve picks basis_of(e) with probability 1/2 and then sees bit_of(e).
      m(index_of(a), index_of(e)) = Scalar(0.5) * overlap_probability(rotated, e);
    }
  }
  return m;
}

/// (1/4) P(E|A) P(B|E) for a scenario with Eve present.
template <typename Scalar = double>
JointDistribution<Scalar> joint_alice_bob(const Scenario& scenario) {
  if (!scenario.eve_present()) {
    throw std::invalid_argument("joint_alice_bob requires an eavesdropping scenario");
  }
  const auto theta = static_cast<Scalar>(scenario.first_segment_angle());
  const auto phi = static_cast<Scalar>(scenario.second_segment_angle());
  return (p_eve_given_alice(theta) * p_bob_given_eve(phi)) / Scalar(4);
}

/// Disagreeing same-basis mass over total same-basis mass.
template <typename Derived>
typename Derived::Scalar qber_from_joint(const Eigen::MatrixBase<Derived>& joint) {
  using Scalar = typename Derived::Scalar;
  const Scalar agree = joint.trace();
  const Scalar disagree = joint(0, 1) + joint(1, 0) + joint(2, 3) + joint(3, 2);
  const Scalar retained = agree + disagree;
  if (!(retained > Scalar(0))) {
    throw std::domain_error("joint distribution has no same-basis mass");
  }
  return disagree / retained;
}

/// (2 - cos 2(theta + phi)) / 4
template <typename Scalar>
Scalar qber_full_attack(Scalar theta, Scalar phi) {
  using std::cos;
  return (Scalar(2) - cos(Scalar(2) * (theta + phi))) / Scalar(4);
}

template <typename Scalar>
Scalar qber_equal_noise(Scalar theta, EqualNoiseForm form = EqualNoiseForm::matrix_product) {
  using std::sin;
  const Scalar s = sin(Scalar(2) * theta);
  if (form == EqualNoiseForm::as_printed) return (Scalar(1) + s * s) / Scalar(4);
  return (Scalar(1) + Scalar(2) * s * s) / Scalar(4);
}

/// (1 + 2 sin^2 phi) / 4
template <typename Scalar>
Scalar qber_near_alice(Scalar phi) {
  using std::sin;
  const Scalar s = sin(phi);
  return (Scalar(1) + Scalar(2) * s * s) / Scalar(4);
}

/// The four distinct entries of the near-Alice joint distribution.
template <typename Scalar>
struct NearAliceEntries {
  Scalar a, b, c, d;
};

template <typename Scalar>
NearAliceEntries<Scalar> near_alice_entries(Scalar phi) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(phi), s = sin(phi), s2 = sin(Scalar(2) * phi);
  return {(Scalar(1) + Scalar(2) * c * c) / Scalar(32), (Scalar(1) + Scalar(2) * s * s) / Scalar(32),
          (Scalar(2) - s2) / Scalar(32), (Scalar(2) + s2) / Scalar(32)};
}

/// Joint distribution of (Alice symbol, Eve outcome) with entries
/// cos^2/8, sin^2/8 and (1 +- sin 2t)/16. Rows and columns sum to 1/4.
template <typename Scalar>
JointDistribution<Scalar> joint_alice_eve(Scalar theta) {
  using std::cos;
  using std::sin;
  const Scalar c2 = cos(theta) * cos(theta) / Scalar(8);
  const Scalar s2 = sin(theta) * sin(theta) / Scalar(8);
  const Scalar lo = (Scalar(1) - sin(Scalar(2) * theta)) / Scalar(16);
  const Scalar hi = (sin(Scalar(2) * theta) + Scalar(1)) / Scalar(16);
  JointDistribution<Scalar> m;
  m << c2, s2, lo, hi,
       s2, c2, hi, lo,
       hi, lo, c2, s2,
       lo, hi, s2, c2;
  return m;
}

/// Noise level, error rate, information terms and key rates for one setting.
struct SecurityPoint {
  Scenario scenario;
  double theta = 0.0;
  double epsilon = 0.0;  // sin^2(theta)
  double qber = 0.0;
  double i_ab = 0.0;
  double i_ae = 0.0;  // 0 when Eve is absent
  double skr = 0.0;
  double devetak_winter = 0.0;
  double devetak_winter_raw = 0.0;
};

/// For the full attack the equal-noise form only matters when theta == phi;
/// otherwise the general closed form is used.
SecurityPoint security_point(const Scenario& scenario,
                             EqualNoiseForm form = EqualNoiseForm::matrix_product);

}  // namespace bb84

#endif  // BB84_SECURITY_HPP
