#pragma once

#include <string>
#include <utility>
#include <vector>

#include "treepack/rng.hpp"

namespace treepack {

/// Simple undirected graph on vertices 0..n-1 with sorted neighbor lists.
struct HostGraph {
  int n = 0;
  std::vector<std::vector<int>> adj;

  static HostGraph empty(int n);
  static HostGraph complete(int n);

  void add_edge(int u, int w);
  bool has_edge(int u, int w) const;
  long edge_count() const;
  int degree(int v) const { return static_cast<int>(adj[v].size()); }
};

/// p-random subgraph: each edge kept independently with probability p.
HostGraph sample_subgraph(const HostGraph& g, double p, Rng& rng);

// edge-list text format: header "graph n=<n>", then one "u v" pair per line
void save_graph(std::ostream& out, const HostGraph& g);
HostGraph load_graph(std::istream& in);

enum class ExpansionMode { exact, sampled };

/// The expansion check decides whether g d-expands into W:
///  (E1) |N_g(X, W)| >= d|X| for every X with 1 <= |X| < |W|/(2d), and
///  (E2) e_g(X, Y) > 0 for all disjoint X, Y with |X|, |Y| >= |W|/(2d).
struct ExpansionQuery {
  std::vector<int> W;
  double d = 1.0;
  ExpansionMode mode = ExpansionMode::exact;
  int trial_budget = 20000;  // sampled mode
};

inline constexpr int kExpansionExactLimit = 16;

enum class ExpansionOutcome { holds, fails, sampled_no_counterexample };

struct ExpansionVerdict {
  ExpansionOutcome outcome = ExpansionOutcome::holds;
  std::string condition;  // "E1" or "E2" when a witness was found
  std::vector<int> witness_x, witness_y;
};

/// Exact mode fully enumerates (refused above kExpansionExactLimit vertices);
/// sampled mode is one-sided: it can only return fails-with-witness or
/// sampled_no_counterexample.
ExpansionVerdict check_expansion(const HostGraph& g, const ExpansionQuery& q, Rng* rng = nullptr);

/// Bipartite demand matching: left vertex y needs exactly demand[y] distinct
/// right neighbors, right vertices used at most once.
struct MatchingInstance {
  int left = 0, right = 0;
  std::vector<int> demand;            // per left vertex
  std::vector<std::vector<int>> adj;  // left -> right neighbor ids
};

struct MatchingResult {
  bool feasible = false;
  std::vector<std::vector<int>> assignment;  // per left vertex, sorted
};

MatchingResult generalized_matching(const MatchingInstance& inst);

/// Vertex-disjoint x_i..y_i paths of exactly ell-1 edges each, with all
/// interior vertices drawn from W; when cover_all is set the interiors must
/// exactly exhaust W (requires |W| == (ell-2)*pairs). Randomized DFS with a
/// restart budget; failure after the budget is reported, not thrown.
struct ConnectResult {
  bool ok = false;
  std::vector<std::vector<int>> paths;  // vertex sequences x_i .. y_i
  int restarts_used = 0;
};

ConnectResult connect_pairs(const HostGraph& g, const std::vector<std::pair<int, int>>& pairs,
                            int ell, const std::vector<int>& W, bool cover_all, Rng& rng,
                            int restart_budget = 200);

}  // namespace treepack
