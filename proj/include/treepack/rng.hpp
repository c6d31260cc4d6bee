#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace treepack {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seedable RNG stream. All randomness in the library flows through this
/// wrapper so that runs are reproducible from a single 64-bit seed and
/// per-trial substreams can be derived by counter (see Rng::stream).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  /// Derived substream `index` of a master seed. trial k of a sweep uses
  /// stream(master, k); the derivation is fixed so alternate implementations
  /// can reproduce runs.
  static Rng stream(std::uint64_t master, std::uint64_t index) {
    return Rng(splitmix64(master ^ (0x9e3779b97f4a7c15ULL * (index + 1))));
  }

  std::uint64_t next() { return gen_(); }

  /// Uniform double in [0, 1).
  double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bias-free via rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % bound;
  }

  int below_int(int bound) { return static_cast<int>(below(static_cast<std::uint64_t>(bound))); }

  bool bernoulli(double p) { return u01() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

/// Counter-based edge label: a pure function of (seed, unordered pair), so
/// sparse clock stores can draw hidden labels on first touch and still be
/// deterministic under the run seed.
inline double edge_label_u01(std::uint64_t label_seed, int u, int w) {
  if (u > w) std::swap(u, w);
  const std::uint64_t key =
      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
      static_cast<std::uint32_t>(w);
  const std::uint64_t h = splitmix64(label_seed ^ splitmix64(key));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace treepack
