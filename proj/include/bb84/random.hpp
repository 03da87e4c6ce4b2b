#ifndef BB84_RANDOM_HPP
#define BB84_RANDOM_HPP

#include <cstdint>
#include <limits>

namespace bb84 {

/// Keyed random stream. A (seed, stream id) pair fully determines the draw
/// sequence, and constructing a stream is O(1), so a simulation can give
/// every (qubit, role) its own stream and stay reproducible under any
/// evaluation order.
///
/// Satisfies UniformRandomBitGenerator so it composes with <random> and
/// <algorithm>.
class RandomSource {
 public:
  using result_type = std::uint64_t;

  RandomSource(std::uint64_t seed, std::uint64_t stream) noexcept;

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t state_;
};

}  // namespace bb84

#endif  // BB84_RANDOM_HPP
