#include "bb84/information.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bb84 {
namespace {

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error(std::string(what) + " must lie in [0, 1]");
}

template <typename Derived>
double shannon_entropy(const Eigen::DenseBase<Derived>& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) h -= xlog2x(p(i));
  return h;
}

}  // namespace

double binary_entropy(double p) {
  require_probability(p, "binary_entropy argument");
  return -xlog2x(p) - xlog2x(1.0 - p);
}

double mutual_information_from_joint(const Eigen::Matrix4d& joint) {
  if ((joint.array() < 0.0).any() || !joint.allFinite()) {
    throw std::domain_error("joint distribution has negative or non-finite entries");
  }
  if (std::abs(joint.sum() - 1.0) > 1e-9) {
    throw std::domain_error("joint distribution does not sum to 1");
  }
  const Eigen::Vector4d row = joint.rowwise().sum();
  const Eigen::RowVector4d col = joint.colwise().sum();
  const double hxy = shannon_entropy(joint.reshaped());
  return std::max(0.0, shannon_entropy(row) + shannon_entropy(col) - hxy);
}

double mutual_information_ae(double epsilon) {
  require_probability(epsilon, "noise level epsilon");
  const double r = std::sqrt(epsilon * (1.0 - epsilon));
  return 2.0 + xlog2x((1.0 - epsilon) / 2.0) + xlog2x(epsilon / 2.0) +
         xlog2x((1.0 - 2.0 * r) / 4.0) + xlog2x((1.0 + 2.0 * r) / 4.0);
}

double mutual_information_ae_as_printed(double epsilon) {
  require_probability(epsilon, "noise level epsilon");
  const double r = std::sqrt(epsilon * (1.0 - epsilon));
  return 2.0 + xlog2x((1.0 - epsilon) / 2.0) + xlog2x(epsilon / 2.0) +
         xlog2x((1.0 - 2.0 * r) / 2.0) + xlog2x((1.0 + 2.0 * r) / 4.0);
}

double mutual_information_ab(double qber) { return 1.0 - binary_entropy(qber); }

double devetak_winter_bound_raw(double i_ab, double i_ae) noexcept { return i_ab - i_ae; }

double devetak_winter_bound(double i_ab, double i_ae) noexcept {
  return std::max(0.0, devetak_winter_bound_raw(i_ab, i_ae));
}

double skr_shor_preskill_raw(double qber) { return 0.5 * (1.0 - binary_entropy(qber)); }

double skr_shor_preskill(double qber) { return std::max(0.0, skr_shor_preskill_raw(qber)); }

}  // namespace bb84
