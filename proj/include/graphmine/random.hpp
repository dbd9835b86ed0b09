#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace graphmine {

namespace detail {

// SplitMix64 finalizer (Stafford "Mix13").
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace detail

/// Counter-based 64-bit generator.
///
/// The i-th output is `mix64(key + (i + 1) * golden)` where the key is a
/// mix of (seed, stream_id). Only integer arithmetic is involved, so the
/// sequence is identical on every platform, and splitting into child
/// streams costs two multiplications. Satisfies UniformRandomBitGenerator.
class RandomSource {
 public:
  using result_type = std::uint64_t;

  explicit RandomSource(std::uint64_t seed = 42, std::uint64_t stream_id = 0) noexcept
      : seed_(seed), stream_id_(stream_id),
        key_(detail::mix64(seed ^ detail::mix64(stream_id + detail::kGolden))) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    ++counter_;
    return detail::mix64(key_ + counter_ * detail::kGolden);
  }

  /// Independent source for sub-task `child`; the parent is not advanced.
  RandomSource derive(std::uint64_t child) const noexcept {
    return RandomSource(seed_, detail::mix64(stream_id_ * detail::kGolden + child + 1));
  }

  /// Uniform double on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer on [0, bound). Lemire's multiply-shift with rejection.
  std::uint64_t uniform_index(std::uint64_t bound) noexcept {
    __extension__ using wide = unsigned __int128;
    if (bound <= 1) return 0;
    wide product = static_cast<wide>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<wide>((*this)()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  /// Standard normal deviate (Marsaglia polar method).
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
  }

  /// Fisher-Yates shuffle. Used instead of std::shuffle, whose algorithm is
  /// implementation-defined.
  template <class T>
  void shuffle(std::span<T> values) noexcept {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace graphmine
