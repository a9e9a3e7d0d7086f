#pragma once

#include <cstdint>
#include <initializer_list>

namespace frechet {

/// Counter-based 64-bit generator (SplitMix64). Streams for concurrent work
/// are derived by hashing (seed, path indices), so results never depend on
/// scheduling order or worker count.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : seed_(seed), counter_(0) {}

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t(0); }

  std::uint64_t operator()() {
    std::uint64_t z = seed_ + (++counter_) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Child generator for stream `index`; independent of draws made so far.
  Rng stream(std::uint64_t index) const {
    return Rng(mix(seed_ ^ mix(index + 0x632be59bd9b4e019ULL)));
  }

  /// Derive a stream from a path of indices, e.g. (n-index, replicate-index).
  static Rng derive(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    Rng r(master);
    for (std::uint64_t p : path) r = r.stream(p);
    return r;
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1).
  double uniform_pos() {
    double u;
    do { u = uniform(); } while (u == 0.0);
    return u;
  }

  /// Standard normal via Box-Muller (one value per call, fixed draw count).
  double normal();

  /// Unbiased uniform integer in [0, bound).
  std::uint64_t uniform_int(std::uint64_t bound);

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace frechet
