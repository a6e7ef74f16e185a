#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace sparsepc {

/// Counter-based splittable random stream.
///
/// Each draw hashes (key, counter) with the SplitMix64 finalizer, so a stream
/// is a pure function of its key. Keys are derived from a root seed by
/// splitting on names or indices; sibling streams never overlap and drawing
/// more values from one stream cannot perturb another. All arithmetic is
/// fixed-width 64-bit, and floating-point values are constructed explicitly
/// from the high mantissa bits, so sequences are reproducible across runs.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : key_(mix(seed ^ 0x8f1bbcdcbfa53e0bULL)) {}

  /// Derive an independent child stream from a label.
  RngStream child(std::string_view name) const {
    return RngStream(from_key_tag{}, mix(key_ ^ mix(fnv1a(name))));
  }
  /// Derive an independent child stream from an index.
  RngStream child(std::uint64_t index) const {
    return RngStream(from_key_tag{}, mix(key_ ^ mix(index + 0x9e3779b97f4a7c15ULL)));
  }

  /// Stream identity; two streams with equal keys produce equal sequences.
  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64() {
    return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
  }

  /// Uniform double in [0, 1) with 53 random mantissa bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bias-free via rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (-bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  bool next_bernoulli(double p) { return next_unit() < p; }

  /// Rademacher sign: +1 or -1 with equal probability.
  double next_sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

  /// Standard normal via Box-Muller; the paired value is cached.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = next_unit();
    } while (u1 <= 0.0);
    const double u2 = next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  struct from_key_tag {};
  RngStream(from_key_tag, std::uint64_t key) : key_(key) {}

  // SplitMix64 finalizer (Steele, Lea, Flood 2014).
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : s) {
      h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace sparsepc
