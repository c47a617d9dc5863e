#pragma once

#include <cstdint>

namespace fracrenew::mc {

// splitmix64: fixed-increment counter generator (Vigna 2015, after Steele,
// Lea & Flood). Output j is a pure function of (initial state, j), which is
// what makes disjoint streams cheap and platform-independent.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += UINT64_C(0x9E3779B97F4A7C15));
    z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
    return z ^ (z >> 31);
  }

  // Uniform draw strictly inside (0, 1): 53-bit mantissa offset by half an ulp,
  // so 0 and 1 are unreachable and log/inversion formulas never see them.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) *
           (1.0 / 9007199254740992.0);
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
  z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
  return z ^ (z >> 31);
}

// Splittable seed: (master_seed, stream_index) -> independent substream.
// Distinct stream indices land the counter at well-separated, decorrelated
// starting states of the global splitmix64 orbit.
struct SeedStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  SeedStream at(std::uint64_t index) const { return {master_seed, index}; }
  SeedStream shifted(std::uint64_t offset) const {
    return {master_seed, stream_index + offset};
  }

  std::uint64_t state() const {
    const std::uint64_t h = mix64(master_seed ^ UINT64_C(0xA0761D6478BD642F));
    return mix64(h + stream_index * UINT64_C(0x9E3779B97F4A7C15));
  }

  SplitMix64 engine() const { return SplitMix64(state()); }
};

// Execution policy for the data-parallel kernels. Both policies produce
// bit-identical results; `serial` is the reference the tests compare against.
enum class Exec { serial, openmp };

}  // namespace fracrenew::mc
