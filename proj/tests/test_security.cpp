#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "bb84/information.hpp"
#include "bb84/security.hpp"

using namespace bb84;

namespace {

constexpr double kTol = 1e-12;
constexpr double kPi = std::numbers::pi;

std::vector<double> angle_grid(std::size_t n, double lo, double hi) {
  std::vector<double> g;
  for (std::size_t i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  return g;
}

// Real unit vectors for |0>, |1>, |+>, |->.
std::array<Eigen::Vector2d, 4> real_symbols() {
  const double h = 1.0 / std::sqrt(2.0);
  return {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1), Eigen::Vector2d(h, h), Eigen::Vector2d(h, -h)};
}

// Test-local intercept-resend transition: 1/2 |<e|U a>|^2 with real vectors.
Eigen::Matrix4d transition_by_hand(double t) {
  const auto v = real_symbols();
  Eigen::Matrix2d u;
  u << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
  Eigen::Matrix4d m;
  for (int a = 0; a < 4; ++a) {
    for (int e = 0; e < 4; ++e) {
      const double amp = v[e].dot(u * v[a]);
      m(a, e) = 0.5 * amp * amp;
    }
  }
  return m;
}

// Explicit sum over Eve's symbol.
Eigen::Matrix4d joint_by_hand(double t, double f) {
  const Eigen::Matrix4d ea = transition_by_hand(t), be = transition_by_hand(f);
  Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int e = 0; e < 4; ++e) j(a, b) += 0.25 * ea(a, e) * be(e, b);
  return j;
}

double max_abs(const Eigen::Matrix4d& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("qber_noise_only") {
  CHECK(qber_noise_only(0.0) == 0.0);
  CHECK(qber_noise_only(kPi / 4.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(qber_noise_only(0.13) == doctest::Approx(0.016805010932743388).epsilon(1e-12));
}

TEST_CASE("p_eve_given_alice") {
  SUBCASE("noiseless rows") {
    const auto m = p_eve_given_alice(0.0);
    Eigen::Matrix4d expected;
    expected << 0.5, 0, 0.25, 0.25,
                0, 0.5, 0.25, 0.25,
                0.25, 0.25, 0.5, 0,
                0.25, 0.25, 0, 0.5;
    CHECK(max_abs(m - expected) < kTol);
  }
  SUBCASE("theta = pi/4, row |0>") {
    const Eigen::RowVector4d row = p_eve_given_alice(kPi / 4.0).row(0);
    CHECK((row - Eigen::RowVector4d(0.25, 0.25, 0.0, 0.5)).cwiseAbs().maxCoeff() < kTol);
    CHECK((transition_by_hand(kPi / 4.0).row(0) - row).cwiseAbs().maxCoeff() < kTol);
  }
  SUBCASE("row stochastic and in [0, 1]") {
    for (double t : angle_grid(97, -3.0, 3.0)) {
      const auto m = p_eve_given_alice(t);
      CHECK((m.rowwise().sum().array() - 1.0).abs().maxCoeff() < kTol);
      CHECK(m.minCoeff() >= -1e-16);
      CHECK(m.maxCoeff() <= 1.0);
      CHECK(max_abs(p_bob_given_eve(t) - m) == 0.0);
    }
  }
}

TEST_CASE("intercept-resend oracle equals the closed-form transition matrix") {
  CHECK(max_abs(intercept_resend_transition_oracle(0.0) - p_eve_given_alice(0.0)) < kTol);
  double worst = 0.0, worst_hand = 0.0;
  for (double t : angle_grid(100, 0.0, kPi / 2.0)) {
    worst = std::max(worst, max_abs(intercept_resend_transition_oracle(t) - p_eve_given_alice(t)));
    worst_hand = std::max(worst_hand, max_abs(transition_by_hand(t) - p_eve_given_alice(t)));
  }
  CHECK(worst < kTol);
  CHECK(worst_hand < kTol);
}

TEST_CASE("joint_alice_bob") {
  SUBCASE("rejects noise only") {
    CHECK_THROWS_AS(joint_alice_bob(Scenario::noise_only(0.1)), std::invalid_argument);
  }
  SUBCASE("near-Alice noiseless distinct values") {
    const auto j = joint_alice_bob(Scenario::near_alice_attack(0.0));
    CHECK(j(0, 0) == doctest::Approx(3.0 / 32));
    CHECK(j(0, 1) == doctest::Approx(1.0 / 32));
    CHECK(j(0, 2) == doctest::Approx(2.0 / 32));
    CHECK(j(0, 3) == doctest::Approx(2.0 / 32));
  }
  SUBCASE("full attack noiseless corner entry") {
    // (1/4)[1/2*1/2 + 1/4*1/4 + 1/4*1/4]
    CHECK(std::abs(joint_alice_bob(Scenario::full_channel_attack(0, 0))(0, 0) - 3.0 / 32) < kTol);
  }
  SUBCASE("normalized and equal to the explicit sum") {
    for (double t : angle_grid(11, 0.0, kPi / 2.0)) {
      for (double f : angle_grid(11, 0.0, kPi / 2.0)) {
        const auto j = joint_alice_bob(Scenario::full_channel_attack(t, f));
        CHECK(std::abs(j.sum() - 1.0) < kTol);
        CHECK(max_abs(j - joint_by_hand(t, f)) < kTol);
      }
    }
  }
  SUBCASE("near-Alice entries follow the a/b/c/d pattern") {
    for (double f : angle_grid(60, 0.0, kPi / 2.0)) {
      const auto e = near_alice_entries(f);
      Eigen::Matrix4d pattern;
      pattern << e.a, e.b, e.c, e.d,
                 e.b, e.a, e.d, e.c,
                 e.d, e.c, e.a, e.b,
                 e.c, e.d, e.b, e.a;
      CHECK(max_abs(joint_alice_bob(Scenario::near_alice_attack(f)) - pattern) < kTol);
    }
  }
}

TEST_CASE("qber_from_joint") {
  CHECK(qber_from_joint(joint_alice_bob(Scenario::full_channel_attack(0, 0))) == doctest::Approx(0.25));
  const Eigen::Matrix4d identity = Eigen::Matrix4d::Identity() / 4.0;
  CHECK(qber_from_joint(identity) == 0.0);
  // Only cross-basis mass: nothing survives sifting.
  Eigen::Matrix4d cross = Eigen::Matrix4d::Zero();
  cross(0, 2) = 0.5;
  cross(3, 1) = 0.5;
  CHECK_THROWS_AS(qber_from_joint(cross), std::domain_error);
  for (double f : angle_grid(40, 0.0, kPi / 2.0)) {
    const double s = std::sin(f);
    CHECK(std::abs(qber_from_joint(joint_alice_bob(Scenario::near_alice_attack(f))) - (1 + 2 * s * s) / 4) < kTol);
  }
}

TEST_CASE("closed-form QBERs against matrix products") {
  CHECK(qber_full_attack(0.0, 0.0) == 0.25);
  CHECK(qber_full_attack(kPi / 8, kPi / 8) == doctest::Approx(0.5).epsilon(1e-15));
  double worst = 0.0;
  for (double t : angle_grid(50, 0.0, kPi / 2.0)) {
    for (double f : angle_grid(50, 0.0, kPi / 2.0)) {
      worst = std::max(worst, std::abs(qber_full_attack(t, f) -
                                       qber_from_joint(joint_alice_bob(Scenario::full_channel_attack(t, f)))));
    }
  }
  CHECK(worst < kTol);

  CHECK(qber_near_alice(0.0) == 0.25);
  CHECK(qber_near_alice(kPi / 2) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("equal-noise QBER and its printed variant") {
  CHECK(qber_equal_noise(0.0) == 0.25);
  CHECK(qber_equal_noise(0.0, EqualNoiseForm::as_printed) == 0.25);
  CHECK(qber_equal_noise(kPi / 4) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(qber_equal_noise(kPi / 4, EqualNoiseForm::as_printed) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(qber_full_attack(kPi / 4, kPi / 4) - qber_equal_noise(kPi / 4)) < kTol);
  for (double t : angle_grid(100, 0.0, kPi / 2.0)) {
    CHECK(std::abs(qber_equal_noise(t) - qber_from_joint(joint_alice_bob(Scenario::full_channel_attack(t, t)))) < kTol);
    const double s = std::sin(2 * t);
    CHECK(std::abs(qber_equal_noise(t) - qber_equal_noise(t, EqualNoiseForm::as_printed) - s * s / 4) < kTol);
  }
}

TEST_CASE("QBER ordering Q1 > Q2 > Q0 on (0, pi/4)") {
  for (int i = 1; i <= 200; ++i) {
    const double t = (kPi / 4) * i / 201.0;
    CHECK(qber_equal_noise(t) > qber_near_alice(t));
    CHECK(qber_near_alice(t) > qber_noise_only(t));
  }
}

TEST_CASE("joint_alice_eve") {
  const auto j0 = joint_alice_eve(0.0);
  CHECK(j0(0, 0) == 0.125);
  CHECK(j0(0, 1) == 0.0);
  CHECK(j0(0, 2) == 0.0625);
  for (double t : angle_grid(77, 0.0, kPi / 2.0)) {
    const auto j = joint_alice_eve(t);
    CHECK(std::abs(j.sum() - 1.0) < kTol);
    CHECK((j.rowwise().sum().array() - 0.25).abs().maxCoeff() < kTol);
    CHECK((j.colwise().sum().array() - 0.25).abs().maxCoeff() < kTol);
    CHECK(max_abs(j - p_eve_given_alice(t) / 4.0) < kTol);
  }
}

TEST_CASE("scenario construction") {
  const auto near = Scenario::near_alice_attack(0.3);
  CHECK(near.theta == 0.0);
  CHECK(near.phi == 0.3);
  CHECK(near.eve_present());
  CHECK_FALSE(Scenario::noise_only(0.2).eve_present());
  CHECK_THROWS_AS(Scenario::full_channel_attack(NAN, 0.0), std::invalid_argument);
  CHECK(parse_scenario_kind("full-attack") == ScenarioKind::full_channel_attack);
  CHECK(parse_scenario_kind(scenario_name(ScenarioKind::near_alice_attack)) == ScenarioKind::near_alice_attack);
  CHECK_THROWS_AS(parse_scenario_kind("eve"), std::invalid_argument);
}

TEST_CASE("security_point") {
  const auto noiseless = security_point(Scenario::noise_only(0.0));
  CHECK(noiseless.qber == 0.0);
  CHECK(noiseless.skr == 0.5);
  CHECK(noiseless.i_ae == 0.0);
  CHECK(noiseless.i_ab == 1.0);

  const auto attack = security_point(Scenario::full_channel_attack(0.0, 0.0));
  CHECK(attack.qber == 0.25);
  CHECK(attack.i_ae == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(attack.devetak_winter == 0.0);
  CHECK(attack.devetak_winter_raw == doctest::Approx(0.18872187554086717 - 0.5).epsilon(1e-12));

  CHECK(security_point(Scenario::near_alice_attack(0.0)).qber == 0.25);

  const auto printed = security_point(Scenario::full_channel_attack(kPi / 4, kPi / 4), EqualNoiseForm::as_printed);
  CHECK(printed.qber == doctest::Approx(0.5));

  for (double t : angle_grid(31, 0.0, kPi / 2.0)) {
    for (const Scenario& sc : {Scenario::noise_only(t), Scenario::full_channel_attack(t, t),
                               Scenario::full_channel_attack(t, 0.2), Scenario::near_alice_attack(t)}) {
      const auto p = security_point(sc);
      CHECK(p.qber >= 0.0);
      CHECK(p.qber <= 1.0);
      CHECK(p.i_ae >= 0.0);
      CHECK(p.i_ae <= 2.0);
      CHECK(p.skr >= 0.0);
      CHECK(p.skr <= 0.5);
      CHECK(std::abs(p.epsilon - std::sin(p.theta) * std::sin(p.theta)) < kTol);
    }
  }
}
