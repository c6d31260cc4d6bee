#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "treepack/sprinkle.hpp"
#include "treepack/tree.hpp"

namespace treepack {

/// Re-derives every packing property from the trees and the embedding maps
/// alone; no engine bookkeeping is trusted.
struct TreeVerdict {
  bool injective = false;
  bool adjacency = false;  // every tree edge maps to an admissible host edge
  std::string detail;
};

struct PackingReport {
  std::vector<TreeVerdict> per_tree;
  bool edge_disjoint = false;
  bool within_host = false;  // all image edges pass the host predicate
  double max_used_label = 0.0;
  int max_union_degree = 0;
  bool pass = false;
  std::string failure;
};

using EdgePredicate = std::function<bool(int, int)>;
using EdgeLabelFn = std::function<double(int, int)>;

PackingReport verify_packing(const std::vector<Tree>& trees,
                             const std::vector<std::vector<int>>& embeddings, int n,
                             const EdgePredicate& edge_ok,
                             const EdgeLabelFn& label_of = nullptr);

/// Checks an engine outcome against the label bound p: an image edge is
/// admissible iff the run used it with label <= p. Fails if the outcome is
/// not a complete packing.
PackingReport verify_outcome(const std::vector<Tree>& trees, const PackingOutcome& outcome,
                             double p);

/// The per-pair overlap statistic sum_s 1[{u,w} subset W_s] / |W_s| with the
/// bound (2p/n) max_s |W_s|, evaluated exactly over all vertex pairs.
/// Cost is O(N w^2) over the recorded W_s plus O(n^2) memory for the table.
struct OverlapStat {
  int n = 0;
  double bound = 0.0;
  double max_value = 0.0;
  double max_ratio = 0.0;
  std::pair<int, int> argmax{-1, -1};
  bool inequality_holds = false;
  bool precondition_holds = false;  // p >= 30 log n / (alpha^2 n)
  double precondition_lhs = 0.0, precondition_rhs = 0.0;
  std::vector<double> table;  // triangular, pair (u<w) at w(w-1)/2+u

  double value(int u, int w) const;
};

OverlapStat overlap_statistic(const PackingOutcome& outcome, double p, double alpha);

/// Fixed-threshold distributional test battery for the engine: backend
/// equivalence (KS on tau, chi-square on the first child), order-statistic
/// moments against d/(r+1) and d(d+1)/((r+1)(r+2)), and first-tree ordered
/// pair uniformity. Thresholds are constants, never adapted to data.
struct BatteryConfig {
  std::uint64_t seed = 0;
  long tau_draws = 100000;
  long pair_runs = 1000000;
  int pair_n = 8;
  double reject_level = 1e-3;   // per-test
  double moment_se_limit = 4.0; // |z| limit for moment checks
  std::vector<std::pair<int, int>> moment_points{{1, 10}, {3, 50}, {5, 20}};
  std::pair<int, int> equivalence_point{3, 50};
  // power floors: below these budgets a test is reported as skipped
  long min_tau_draws = 2000;
  long min_pair_runs = 56000;
  // test hook: shifts d in the lazy order-statistic draw (mutation testing)
  int lazy_d_shift = 0;
};

struct BatteryRow {
  std::string name;
  double statistic = 0.0;  // p-value or |z|, see threshold_kind
  double threshold = 0.0;
  std::string threshold_kind;  // "p_value_min" or "abs_z_max"
  bool pass = false;
  bool skipped = false;
};

struct BatteryReport {
  std::vector<BatteryRow> rows;
  std::string note;
  bool all_pass() const;
};

BatteryReport stat_battery(const BatteryConfig& config);

}  // namespace treepack
