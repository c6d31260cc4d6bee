#pragma once

#include <cstdint>
#include <vector>

#include "treepack/clocks.hpp"
#include "treepack/tree.hpp"

namespace treepack {

struct UsedEdge {
  int u = 0, w = 0;
  double label = 0.0;
  int round = 0;
};

/// One embedding step: runs the clocks at u against the given unused host
/// vertices until d of them ring. Eager backend: entry times are read off
/// the hidden labels and the d smallest win (ties broken by vertex id).
/// Lazy backend: the step duration is the d-th order statistic of r = |N(1)|
/// independent uniforms, drawn by ascending inverse transform, and the
/// ringing vertices are a uniform random ordered d-subset of the eligible
/// set. Either way every other unused edge clock advances by tau, per the
/// update c <- min{t, c + (1-c) tau}.
struct StepSample {
  bool ok = false;        // eligible count was >= d
  double tau = 0.0;       // step duration tau_i
  std::vector<int> children;     // ringing vertices in ring order
  std::vector<double> labels;    // their labels (c = t after the ring)
  int eligible = 0;              // r = |N_i(1)|
};

StepSample sample_step(ClockStore& clocks, int u, const std::vector<int>& unused, int d,
                       Rng& rng);

struct RoundOutcome {
  bool ok = false;
  int fail_step = -1;          // BFS label of the failing step
  std::vector<int> embedding;  // tree vertex id -> host vertex
  std::vector<int> w_set;      // uncovered hosts plus the designated image
  std::vector<UsedEdge> used;
  // eligible-neighborhood floor: while the degree cap held after the
  // previous round, every step must see |N_i(1)| >= n - ch(i) - cap
  long floor_checked = 0, floor_violations = 0;
};

struct EligibleFloorContext {
  bool prev_alive = true;  // degree-cap event after the previous round
  double cap = 0.0;        // 2 n p
};

RoundOutcome run_round(ClockStore& clocks, const Tree& tree, int root, int designated, Rng& rng,
                       const EligibleFloorContext* ctx = nullptr);

struct PackingOutcome {
  int n = 0;
  double p = 0.0;
  Backend backend = Backend::lazy;

  bool valid_packing = false;  // every tree embedded, no termination
  bool success = false;        // valid_packing && max_used_label <= p
  int failed_round = -1, failed_step = -1;
  int terminated_round = -1;  // degree cap exceeded at the end of this round

  std::vector<std::vector<int>> embeddings;  // per completed round
  std::vector<std::vector<int>> w_sets;
  std::vector<int> designated;     // vertex whose image joins W_s, per round
  std::vector<std::uint8_t> cap_alive;  // degree-cap event trace per round
  std::vector<UsedEdge> used_edges;

  double max_clock = 0.0;
  double max_used_label = 0.0;
  int max_union_degree = 0;

  long floor_checked = 0, floor_violations = 0;
  // used edges rung exactly once with label == final clock value, and the
  // maximum used label never exceeds the maximum clock value
  bool label_invariant_ok = false;
};

struct PackOptions {
  double cap_factor = 2.0;      // degree cap = cap_factor * n * p
  std::vector<int> roots;       // per-tree roots; empty -> tree.root or 0
  std::vector<int> designated;  // per-tree designated vertices; empty -> root
};

/// Packs the trees round by round into the labeled complete host graph.
/// Embedding failure (some step sees fewer eligible neighbors than needed)
/// and degree-cap termination are recorded outcomes, not exceptions.
PackingOutcome pack(const std::vector<Tree>& trees, int n, double p, Backend backend, Rng& rng,
                    const PackOptions& opts = {});

std::vector<int> union_degrees(const std::vector<Tree>& trees,
                               const std::vector<std::vector<int>>& embeddings, int n);

/// True iff the maximum union-image degree stays within the cap.
bool check_degree_cap(const std::vector<int>& degrees, double cap);

}  // namespace treepack
