#include "bb84/random.hpp"

namespace bb84 {
namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream) noexcept
    : seed_(seed), stream_(stream), state_(mix64(mix64(seed + kGamma) ^ mix64(~stream))) {}

RandomSource::result_type RandomSource::operator()() noexcept {
  state_ += kGamma;
  return mix64(state_);
}

double RandomSource::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

}  // namespace bb84
