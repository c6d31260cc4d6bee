#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treepack/graph.hpp"
#include "treepack/sprinkle.hpp"
#include "treepack/tree.hpp"

namespace treepack {

/// Derived parameters of the two-stage spanning pipeline. The edge budget p
/// splits as (1-p) = (1-q)(1-p_prime) with q = eps*p/2: stage 1 packs the
/// large parts at p_prime, stage 2 completes the small parts out of the
/// q-budget. alpha is eps / (8 delta (log n)^5), floored so the small part
/// keeps at least one edge at desk scale (alpha_floored records when).
struct SpanningConfig {
  int n = 0;
  double p = 0.0, eps = 0.0;
  int delta = 0;
  double alpha = 0.0;
  bool alpha_floored = false;
  double q = 0.0;
  double p_prime = 0.0;
};

SpanningConfig make_spanning_config(int n, double p, double eps, int delta);

/// Uniform edge coloring of K_n with K colors plus a balanced contiguous
/// partition of the tree list into K batches. The color-i subgraph of a
/// G(n,p) sample is distributed as G(n, p/K).
struct BatchSplit {
  int K = 1;
  int n = 0;
  double sub_p = 0.0;  // p / K
  std::vector<std::vector<int>> batches;   // tree indices
  std::vector<std::uint16_t> coloring;     // triangular array

  int color_of(int u, int w) const;
};

BatchSplit batch_split(int tree_count, int n, double p, int K, Rng& rng);

enum class EmbedRoute { matching, connector, degraded_greedy };

const char* embed_route_name(EmbedRoute r);

struct EmbedResult {
  bool ok = false;
  EmbedRoute route = EmbedRoute::matching;
  std::string fail_stage;      // "greedy" | "matching" | "connector"
  std::vector<int> embedding;  // tree vertex -> host vertex of g
  bool deviation = false;      // desk-scale degradation was applied
};

/// Embeds a spanning tree of the host g (|V(tree)| == |V(g)|) mapping tree
/// vertex v to host vertex x, out of a p-budget split into two independent
/// exposure stages. Trees with many leaves strip a leaf set and finish with
/// a generalized matching; trees with few leaves contract bare paths and
/// finish with the heuristic pair connector.
EmbedResult embed_tree_two_stage(const Tree& tree, const HostGraph& g, double p, int x, int v,
                                 Rng& rng);

struct SpanningTreeRecord {
  bool reached = false;
  bool embedded = false;
  EmbedRoute route = EmbedRoute::matching;
  double qs = 0.0;
  bool qs_clamped = false;  // q_s > 1: outside the stated regime, recorded
  int w_size = 0;
  std::string fail_stage;
  bool deviation = false;
};

struct SpanningOutcome {
  SpanningConfig config;
  PackingOutcome stage1;
  std::vector<std::vector<int>> embeddings;  // full per-tree maps; empty if not embedded
  std::vector<SpanningTreeRecord> records;
  int aborted_at = -1;       // tree index at which the stage-2 loop aborted
  std::string abort_cause;   // "h2_degree_cap" | "stage2_embedding"
  bool stage1_ok = false;
  bool success = false;
};

/// The two-stage spanning packing: partition every tree into L_s and S_s
/// sharing v_s, pack the L_s by online sprinkling at p_prime, then complete
/// each S_s inside W_s at rate q_s while H_2 stays below the np degree cap.
SpanningOutcome pack_spanning(const std::vector<Tree>& trees, int n, double p, double eps,
                              Backend backend, Rng& rng);

}  // namespace treepack
