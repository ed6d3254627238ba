#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace msa {

// Purpose tags keep the streams for different consumers disjoint.
enum class StreamTag : std::uint64_t {
  Sample = 1,
  SplitSample = 2,
  Instance = 3,
  KMeans = 4,
  Knn = 5,
  Test = 99,
};

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t stream_key(std::uint64_t seed, StreamTag tag, std::uint64_t a,
                                          std::uint64_t b = 0) {
  std::uint64_t h = mix64(seed ^ mix64(static_cast<std::uint64_t>(tag)));
  h = mix64(h ^ mix64(a + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ mix64(b + 0x85157af5e5b7a8d3ULL));
  return h;
}

/// Counter-based generator: the i-th draw is a pure function of (key, i), so any
/// (seed, replicate, domain) triple maps to the same numbers no matter which
/// thread evaluates it or in which order.
class Stream {
 public:
  explicit Stream(std::uint64_t key) : key_(key) {}
  Stream(std::uint64_t seed, StreamTag tag, std::uint64_t a, std::uint64_t b = 0)
      : key_(stream_key(seed, tag, a, b)) {}

  std::uint64_t next_u64() { return mix64(key_ ^ mix64(++counter_)); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; the spare value is cached so draws come in pairs.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

  // Uniform index in [0, n).
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * n) % n; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace msa
