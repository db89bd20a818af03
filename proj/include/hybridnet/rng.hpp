#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace hybridnet {

/**
 * Deterministic randomness utilities.
 *
 * All sampling helpers are implemented on top of std::mt19937_64, whose output
 * sequence is fixed by the standard.  Bounded/real draws are hand-rolled so
 * that results are identical across standard libraries (std::uniform_int_distribution
 * is implementation-defined and would break byte-identical reruns).
 *
 * Seed fan-out: one global seed is split into named substreams via
 * derive_seed(seed, tag, index).  Counter-based draws (counter_u01) are used
 * where per-event randomness must not depend on iteration order.
 */

constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

// (seed, tag, index) -> independent substream seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag,
                                 std::uint64_t index = 0) {
  std::uint64_t h = mix64(seed + kGolden64);
  h = mix64(h ^ fnv1a64(tag));
  h = mix64(h ^ (index + kGolden64));
  return h;
}

inline double u01_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0, 1)
}

// Stateless per-event draw; independent of evaluation order.
inline double counter_u01(std::uint64_t key, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  std::uint64_t h = mix64(key ^ (a + kGolden64));
  h = mix64(h ^ (b + 0xC2B2AE3D27D4EB4Full));
  h = mix64(h ^ (c + 0x165667B19E3779F9ull));
  return u01_from_bits(h);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  double next_u01() { return u01_from_bits(next_u64()); }

  bool bernoulli(double p) { return next_u01() < p; }

  // Unbiased integer in [0, bound) via rejection.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: bound must be > 0");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return x % bound;
    }
  }

  std::uint64_t uniform_in(std::uint64_t lo, std::uint64_t hi_inclusive) {
    if (hi_inclusive < lo) throw std::invalid_argument("uniform_in: empty range");
    return lo + uniform_below(hi_inclusive - lo + 1);
  }

  // k distinct values from [0, n) by partial Fisher-Yates.
  std::vector<std::uint32_t> sample_distinct(std::uint32_t n, std::uint32_t k) {
    if (k > n) throw std::invalid_argument("sample_distinct: k > n");
    std::vector<std::uint32_t> pool(n);
    for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
    for (std::uint32_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::uint32_t>(uniform_below(n - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace hybridnet
