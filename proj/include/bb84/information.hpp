// Entropies, mutual information and key-rate bounds. All information
// quantities are in bits and follow the 0 log 0 = 0 convention.

#ifndef BB84_INFORMATION_HPP
#define BB84_INFORMATION_HPP

#include <Eigen/Dense>

namespace bb84 {

/// -p log2 p - (1-p) log2(1-p); throws std::domain_error outside [0, 1].
double binary_entropy(double p);

/// I(X:Y) = H(X) + H(Y) - H(X,Y) for a 4x4 joint distribution. Throws
/// std::domain_error if entries are negative or do not sum to one.
double mutual_information_from_joint(const Eigen::Matrix4d& joint);

/// Alice-Eve information as a function of eps = sin^2(theta), derived from
/// the joint (A, E) distribution:
///   2 + (1-e)/2 log2((1-e)/2) + e/2 log2(e/2)
///     + (1-2r)/4 log2((1-2r)/4) + (1+2r)/4 log2((1+2r)/4),  r = sqrt(e(1-e))
double mutual_information_ae(double epsilon);

/// Same expression with the third term's coefficient and argument divided by
/// 2 instead of 4. Its coefficients do not sum to one; exposed only to report
/// how far it departs from the consistent form.
double mutual_information_ae_as_printed(double epsilon);

/// 1 - H2(qber): binary symmetric channel information per sifted bit.
double mutual_information_ab(double qber);

/// i_ab - i_ae, unclamped.
double devetak_winter_bound_raw(double i_ab, double i_ae) noexcept;
double devetak_winter_bound(double i_ab, double i_ae) noexcept;

/// 1/2 (1 - H2(qber)), unclamped.
double skr_shor_preskill_raw(double qber);
double skr_shor_preskill(double qber);

}  // namespace bb84

#endif  // BB84_INFORMATION_HPP
