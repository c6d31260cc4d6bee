#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "treepack/rng.hpp"

namespace treepack {

enum class Backend { eager, lazy };

/// Per-edge alarm clocks on the complete host graph. Each unordered pair
/// carries a clock value c in [0,1] and, in the eager backend, a hidden
/// label t; the edge "rings" (becomes used, exactly once) when c reaches t.
/// The lazy backend never materializes t: an unrung edge's label is uniform
/// on (c, 1] conditionally on the past, which is exactly what the order
/// statistic sampling in the engine consumes.
///
/// Storage is a triangular array up to 4096 vertices and a hash map of
/// touched edges above that; eager labels are a pure function of the label
/// seed and the edge key, so sparsity does not break determinism.
class ClockStore {
 public:
  ClockStore(int n, Backend backend, std::uint64_t label_seed);

  int size() const { return n_; }
  Backend backend() const { return backend_; }

  double clock(int u, int w) const;
  bool rung(int u, int w) const;

  /// Hidden label. Eager backend only for unrung edges; for rung edges both
  /// backends return the recorded label (== final clock value).
  double label(int u, int w) const;

  /// Remaining time until the hidden label at the current clock value,
  /// rescaled to [0,1]: (t - c) / (1 - c). Eager backend, unrung edges.
  double entry_time(int u, int w) const;

  /// Step update c <- min{t, c + (1-c) tau} for an unrung edge; no-op on
  /// rung edges (their clocks are stopped forever).
  void advance(int u, int w, double tau);

  /// Marks the edge as used and freezes c = t = label.
  void ring(int u, int w, double lab);

  double max_clock() const { return max_clock_; }
  long rung_count() const { return rung_count_; }

  /// Test support: pins the hidden label of an edge (eager backend).
  void force_label(int u, int w, double t);

 private:
  struct Edge {
    double c = 0.0;
    bool rung = false;
    bool label_forced = false;
    double label = 0.0;  // recorded on ring(); or forced
  };

  static std::uint64_t key(int u, int w) {
    if (u > w) std::swap(u, w);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(w);
  }
  std::size_t tri_index(int u, int w) const {
    if (u > w) std::swap(u, w);
    return static_cast<std::size_t>(w) * (w - 1) / 2 + u;
  }

  const Edge* find(int u, int w) const;
  Edge& touch(int u, int w);
  double hidden_label(int u, int w, const Edge* e) const;

  int n_;
  Backend backend_;
  std::uint64_t label_seed_;
  bool dense_;
  std::vector<Edge> dense_edges_;
  std::unordered_map<std::uint64_t, Edge> sparse_edges_;
  double max_clock_ = 0.0;
  long rung_count_ = 0;
};

inline constexpr int kDenseClockLimit = 4096;

}  // namespace treepack
