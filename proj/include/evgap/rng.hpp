#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace evgap {

// Seeded, id-keyed random streams. Every randomized stage derives its draws
// from (seed, purpose, sample id, stream) so results do not depend on
// processing order or thread count. The scheme is fixed and documented in
// the README; changing any constant changes every downstream artifact.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// FNV-1a over the UTF-8 bytes of an id.
inline constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Domain separation between stages that key off the same (seed, id).
enum class RngPurpose : std::uint64_t {
  Prune = 1,    // low-steering-angle pruning
  Select = 2,   // biased-set opposite-sample selection
  Augment = 3,  // per-transform augmentation draws
};

class DerivedRng {
 public:
  DerivedRng(std::uint64_t seed, RngPurpose purpose, std::string_view id,
             std::uint64_t stream = 0)
      : state_(seed) {
    absorb(static_cast<std::uint64_t>(purpose));
    absorb(fnv1a64(id));
    absorb(stream);
  }

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // [0, 1), 53-bit resolution
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  // integer in [0, n-1], n >= 1
  std::uint64_t next_index(std::uint64_t n) {
    auto i = static_cast<std::uint64_t>(next_unit() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  // standard normal, Box-Muller cosine branch; consumes two uniforms
  double next_normal() {
    double u1 = 1.0 - next_unit();  // (0, 1]
    double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  void absorb(std::uint64_t v) { state_ = mix64(state_ + kGolden + v); }

  std::uint64_t state_;
};

}  // namespace evgap
