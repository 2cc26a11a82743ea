#pragma once

#include <cstdint>
#include <limits>

namespace bsv {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based random stream for one pulse: the state is a pure function of
/// (seed, pulse_id), so pulses can be generated in any order or on any worker.
/// Satisfies UniformRandomBitGenerator (SplitMix64 sequence).
class PulseRng {
public:
  using result_type = std::uint64_t;

  PulseRng(std::uint64_t seed, std::uint64_t pulse_id) noexcept : state_(mix64(mix64(seed) ^ pulse_id)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

private:
  std::uint64_t state_;
};

}  // namespace bsv
