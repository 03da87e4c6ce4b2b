// Single-qubit states, the four BB84 symbols, the collective rotation
// channel and Born-rule measurement.
//
// All angles are radians. Symbols are ordered |0>, |1>, |+>, |-> everywhere
// in the library; matrix rows and columns follow that order.

#ifndef BB84_QUANTUM_HPP
#define BB84_QUANTUM_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string_view>

#include <Eigen/Dense>

#include "bb84/random.hpp"

namespace bb84 {

enum class Bit : std::uint8_t { zero = 0, one = 1 };
enum class Basis : std::uint8_t { Z = 0, X = 1 };

/// One of |0>, |1>, |+>, |->; the underlying value is the canonical index.
enum class Symbol : std::uint8_t { zero = 0, one = 1, plus = 2, minus = 3 };

inline constexpr std::array<Symbol, 4> kSymbols{Symbol::zero, Symbol::one, Symbol::plus,
                                                Symbol::minus};

constexpr int to_int(Bit b) noexcept { return static_cast<int>(b); }
constexpr int index_of(Symbol s) noexcept { return static_cast<int>(s); }

constexpr Bit bit_from_int(int v) {
  if (v != 0 && v != 1) throw std::invalid_argument("bit value must be 0 or 1");
  return static_cast<Bit>(v);
}

constexpr Symbol symbol_from_index(int i) {
  if (i < 0 || i > 3) throw std::invalid_argument("symbol index must be in 0..3");
  return static_cast<Symbol>(i);
}

constexpr Symbol symbol_of(Bit b, Basis basis) noexcept {
  return static_cast<Symbol>(2 * static_cast<int>(basis) + to_int(b));
}
constexpr Bit bit_of(Symbol s) noexcept { return static_cast<Bit>(index_of(s) & 1); }
constexpr Basis basis_of(Symbol s) noexcept { return static_cast<Basis>(index_of(s) >> 1); }

constexpr Bit flip(Bit b) noexcept { return b == Bit::zero ? Bit::one : Bit::zero; }

constexpr char basis_char(Basis b) noexcept { return b == Basis::Z ? 'Z' : 'X'; }

constexpr std::string_view symbol_name(Symbol s) noexcept {
  constexpr std::array<std::string_view, 4> names{"|0>", "|1>", "|+>", "|->"};
  return names[static_cast<std::size_t>(index_of(s))];
}

template <typename Scalar>
using PureState = Eigen::Matrix<std::complex<Scalar>, 2, 1>;

template <typename Scalar>
using Rotation = Eigen::Matrix<Scalar, 2, 2>;

template <typename Scalar>
bool is_normalized(const PureState<Scalar>& state, Scalar tol = Scalar(1e-12)) {
  using std::abs;
  return abs(state.squaredNorm() - Scalar(1)) <= tol;
}

/// Amplitudes of a BB84 symbol in the computational basis.
template <typename Scalar = double>
PureState<Scalar> encode(Symbol s) {
  using std::sqrt;
  const Scalar h = Scalar(1) / sqrt(Scalar(2));
  PureState<Scalar> v;
  switch (s) {
    case Symbol::zero: v << Scalar(1), Scalar(0); break;
    case Symbol::one: v << Scalar(0), Scalar(1); break;
    case Symbol::plus: v << h, h; break;
    case Symbol::minus: v << h, -h; break;
  }
  return v;
}

template <typename Scalar = double>
PureState<Scalar> encode(Bit b, Basis basis) {
  return encode<Scalar>(symbol_of(b, basis));
}

/// U(theta) = [[cos, sin], [-sin, cos]]. This real rotation maps
/// |0> -> cos|0> - sin|1> and |+> -> cos|+> + sin|->.
template <typename Scalar>
Rotation<Scalar> rotation_matrix(Scalar theta) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(theta), s = sin(theta);
  Rotation<Scalar> u;
  u << c, s, -s, c;
  return u;
}

template <typename Scalar>
PureState<Scalar> apply_rotation(const PureState<Scalar>& state, Scalar theta) {
  return rotation_matrix(theta).template cast<std::complex<Scalar>>() * state;
}

template <typename Scalar>
Scalar bit_flip_probability(Scalar theta) {
  using std::sin;
  const Scalar s = sin(theta);
  return s * s;
}

/// |<symbol|state>|^2
template <typename Scalar>
Scalar overlap_probability(const PureState<Scalar>& state, Symbol symbol) {
  const std::complex<Scalar> amp = encode<Scalar>(symbol).dot(state);
  return std::norm(amp);
}

/// Born-rule measurement in `basis`; consumes exactly one uniform draw.
template <typename Scalar>
Bit measure(const PureState<Scalar>& state, Basis basis, RandomSource& rng) {
  const Scalar p0 = overlap_probability(state, symbol_of(Bit::zero, basis));
  return rng.uniform() < static_cast<double>(p0) ? Bit::zero : Bit::one;
}

}  // namespace bb84

#endif  // BB84_QUANTUM_HPP
