#include "treepack/spanning.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace treepack {

SpanningConfig make_spanning_config(int n, double p, double eps, int delta) {
  if (n < 2 || !(p > 0.0 && p <= 1.0) || !(eps > 0.0 && eps < 1.0) || delta < 1) {
    throw std::invalid_argument("make_spanning_config: bad parameters");
  }
  SpanningConfig cfg;
  cfg.n = n;
  cfg.p = p;
  cfg.eps = eps;
  cfg.delta = delta;
  const double logn = std::log(static_cast<double>(n));
  cfg.alpha = eps / (8.0 * delta * std::pow(logn, 5.0));
  if (static_cast<long>(cfg.alpha * n) < 1) {
    cfg.alpha = 1.05 / static_cast<double>(n);
    cfg.alpha_floored = true;
  }
  cfg.q = eps * p / 2.0;
  cfg.p_prime = (p - cfg.q) / (1.0 - cfg.q);  // (1-p) = (1-q)(1-p')
  return cfg;
}

int BatchSplit::color_of(int u, int w) const {
  if (u > w) std::swap(u, w);
  return coloring[static_cast<std::size_t>(w) * (w - 1) / 2 + u];
}

BatchSplit batch_split(int tree_count, int n, double p, int K, Rng& rng) {
  if (K < 1) throw std::invalid_argument("batch_split: need K >= 1");
  if (tree_count < 0 || n < 1) throw std::invalid_argument("batch_split: bad sizes");
  BatchSplit bs;
  bs.K = K;
  bs.n = n;
  bs.sub_p = p / K;
  bs.coloring.resize(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (auto& c : bs.coloring) c = static_cast<std::uint16_t>(rng.below(static_cast<std::uint64_t>(K)));
  bs.batches.assign(K, {});
  int next = 0;
  for (int i = 0; i < K; ++i) {
    const int size = tree_count / K + (i < tree_count % K ? 1 : 0);
    for (int j = 0; j < size; ++j) bs.batches[i].push_back(next++);
  }
  return bs;
}

const char* embed_route_name(EmbedRoute r) {
  switch (r) {
    case EmbedRoute::matching:
      return "matching";
    case EmbedRoute::connector:
      return "connector";
    case EmbedRoute::degraded_greedy:
      return "degraded_greedy";
  }
  return "?";
}

namespace {

struct GreedyResult {
  bool ok = false;
  std::vector<int> embedding;  // tree vertex -> host vertex, -1 where unset
};

// Stage-1 style BFS embedding: expose each candidate host edge at the active
// vertex once with probability q and map the children to a uniformly random
// subset of the hits.
GreedyResult greedy_bfs_embed(const Tree& t, const HostGraph& g, double q, int root, int x,
                              Rng& rng) {
  GreedyResult res;
  res.embedding.assign(t.m, -1);
  const BfsLayout lay = bfs_order(t, root);
  std::vector<int> image(t.m, -1);
  image[0] = x;
  res.embedding[root] = x;
  std::vector<char> host_used(g.n, 0);
  host_used[x] = 1;

  for (int i : lay.internal) {
    const int d = lay.child_count[i];
    if (d == 0) continue;
    const int u = image[i];
    std::vector<int> hits;
    for (int w : g.adj[u]) {
      if (!host_used[w] && rng.bernoulli(q)) hits.push_back(w);
    }
    if (static_cast<int>(hits.size()) < d) return res;
    for (int j = 0; j < d; ++j) {
      const int idx = j + rng.below_int(static_cast<int>(hits.size()) - j);
      std::swap(hits[j], hits[idx]);
      const int ch = lay.first_child[i] + j;
      image[ch] = hits[j];
      res.embedding[lay.order[ch]] = hits[j];
      host_used[hits[j]] = 1;
    }
  }
  res.ok = true;
  return res;
}

// subtree of t on kept vertices (local reindexing) plus extra edges
struct ReducedTree {
  Tree tree;
  std::vector<int> to_original;   // local -> original
  std::vector<int> to_local;      // original -> local or -1
};

ReducedTree reduce_tree(const Tree& t, const std::vector<char>& keep,
                        const std::vector<std::pair<int, int>>& extra_edges) {
  ReducedTree red;
  red.to_local.assign(t.m, -1);
  for (int v = 0; v < t.m; ++v) {
    if (keep[v]) {
      red.to_local[v] = static_cast<int>(red.to_original.size());
      red.to_original.push_back(v);
    }
  }
  std::vector<std::pair<int, int>> edges;
  for (auto [a, b] : t.edges()) {
    if (keep[a] && keep[b]) edges.emplace_back(red.to_local[a], red.to_local[b]);
  }
  for (auto [a, b] : extra_edges) edges.emplace_back(red.to_local[a], red.to_local[b]);
  red.tree = make_tree(static_cast<int>(red.to_original.size()), edges);
  return red;
}

EmbedResult embed_many_leaves(const Tree& t, const HostGraph& g, double q, int x, int v,
                              long leaf_target, Rng& rng) {
  EmbedResult res;
  res.route = EmbedRoute::matching;
  const int n = g.n;

  std::vector<int> leaf_pool;
  for (int u = 0; u < t.m; ++u) {
    if (t.degree(u) == 1 && u != v) leaf_pool.push_back(u);
  }
  if (static_cast<long>(leaf_pool.size()) < leaf_target) {
    res.deviation = true;  // below the nominal leaf budget; strip what exists
    leaf_target = static_cast<long>(leaf_pool.size());
  }
  std::vector<char> keep(t.m, 1);
  std::vector<int> stripped(leaf_pool.begin(), leaf_pool.begin() + leaf_target);
  for (int u : stripped) keep[u] = 0;

  ReducedTree red = reduce_tree(t, keep, {});
  GreedyResult stage1 = greedy_bfs_embed(red.tree, g, q, red.to_local[v], x, rng);
  if (!stage1.ok) {
    res.fail_stage = "greedy";
    return res;
  }

  // leaves attach through a generalized matching from the parent images into
  // the unused hosts, over a fresh exposure of the bipartite edges
  std::vector<char> host_used(n, 0);
  for (int img : stage1.embedding) host_used[img] = 1;
  std::vector<int> right_pool;
  for (int u = 0; u < n; ++u) {
    if (!host_used[u]) right_pool.push_back(u);
  }

  std::vector<int> parents;                  // distinct parents of stripped leaves
  std::vector<std::vector<int>> parent_leaves;
  std::vector<int> parent_index(t.m, -1);
  for (int leaf : stripped) {
    const int par = t.adj[leaf][0];
    if (parent_index[par] < 0) {
      parent_index[par] = static_cast<int>(parents.size());
      parents.push_back(par);
      parent_leaves.emplace_back();
    }
    parent_leaves[parent_index[par]].push_back(leaf);
  }

  MatchingInstance inst;
  inst.left = static_cast<int>(parents.size());
  inst.right = static_cast<int>(right_pool.size());
  inst.demand.resize(inst.left);
  inst.adj.resize(inst.left);
  for (int y = 0; y < inst.left; ++y) {
    inst.demand[y] = static_cast<int>(parent_leaves[y].size());
    const int py = stage1.embedding[red.to_local[parents[y]]];
    for (int z = 0; z < inst.right; ++z) {
      if (g.has_edge(py, right_pool[z]) && rng.bernoulli(q)) inst.adj[y].push_back(z);
    }
  }
  MatchingResult match = generalized_matching(inst);
  if (!match.feasible) {
    res.fail_stage = "matching";
    return res;
  }

  res.embedding.assign(t.m, -1);
  for (int u = 0; u < t.m; ++u) {
    if (keep[u]) res.embedding[u] = stage1.embedding[red.to_local[u]];
  }
  for (int y = 0; y < inst.left; ++y) {
    for (std::size_t j = 0; j < parent_leaves[y].size(); ++j) {
      res.embedding[parent_leaves[y][j]] = right_pool[match.assignment[y][j]];
    }
  }
  res.ok = true;
  return res;
}

EmbedResult embed_few_leaves(const Tree& t, const HostGraph& g, double p, double q, int x, int v,
                             int bare_len, long path_target, Rng& rng) {
  EmbedResult res;
  res.route = EmbedRoute::connector;
  const int n = g.n;

  // vertex-disjoint length-bare_len pieces avoiding v (pieces from one
  // segment share junction endpoints, so re-filter for full disjointness)
  std::vector<std::vector<int>> pieces = find_bare_paths(t, bare_len);
  std::vector<std::vector<int>> chosen;
  std::vector<char> touched(t.m, 0);
  touched[v] = 1;
  for (const auto& piece : pieces) {
    if (static_cast<long>(chosen.size()) >= path_target) break;
    bool free = true;
    for (int u : piece) free = free && !touched[u];
    if (!free) continue;
    for (int u : piece) touched[u] = 1;
    chosen.push_back(piece);
  }
  if (chosen.empty()) {
    res.route = EmbedRoute::degraded_greedy;
    res.deviation = true;
    GreedyResult direct = greedy_bfs_embed(t, g, p, v, x, rng);
    if (!direct.ok) {
      res.fail_stage = "greedy";
      return res;
    }
    res.embedding = std::move(direct.embedding);
    res.ok = true;
    return res;
  }
  if (static_cast<long>(chosen.size()) < path_target) res.deviation = true;

  // contract every chosen piece to a direct edge between its endpoints
  std::vector<char> keep(t.m, 1);
  std::vector<std::pair<int, int>> contracted;
  for (const auto& piece : chosen) {
    for (std::size_t j = 1; j + 1 < piece.size(); ++j) keep[piece[j]] = 0;
    contracted.emplace_back(piece.front(), piece.back());
  }
  ReducedTree red = reduce_tree(t, keep, contracted);

  GreedyResult stage1 = greedy_bfs_embed(red.tree, g, q, red.to_local[v], x, rng);
  if (!stage1.ok) {
    res.fail_stage = "greedy";
    return res;
  }

  std::vector<char> host_used(n, 0);
  for (int img : stage1.embedding) host_used[img] = 1;
  std::vector<int> leftover;
  for (int u = 0; u < n; ++u) {
    if (!host_used[u]) leftover.push_back(u);
  }
  std::vector<std::pair<int, int>> pair_images;
  for (const auto& piece : chosen) {
    pair_images.emplace_back(stage1.embedding[red.to_local[piece.front()]],
                             stage1.embedding[red.to_local[piece.back()]]);
  }

  // second exposure: connector paths live in a fresh q-sample of g
  HostGraph sampled = sample_subgraph(g, q, rng);
  ConnectResult conn = connect_pairs(sampled, pair_images, bare_len + 1, leftover,
                                     /*cover_all=*/true, rng);
  if (!conn.ok) {
    res.fail_stage = "connector";
    return res;
  }

  res.embedding.assign(t.m, -1);
  for (int u = 0; u < t.m; ++u) {
    if (keep[u]) res.embedding[u] = stage1.embedding[red.to_local[u]];
  }
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const auto& piece = chosen[i];
    const auto& path = conn.paths[i];  // host vertices, endpoints included
    for (std::size_t j = 1; j + 1 < piece.size(); ++j) res.embedding[piece[j]] = path[j];
  }
  res.ok = true;
  return res;
}

}  // namespace

EmbedResult embed_tree_two_stage(const Tree& tree, const HostGraph& g, double p, int x, int v,
                                 Rng& rng) {
  if (tree.m != g.n) throw std::invalid_argument("embed_tree_two_stage: tree must span the host");
  if (x < 0 || x >= g.n || v < 0 || v >= tree.m) {
    throw std::invalid_argument("embed_tree_two_stage: bad anchor");
  }
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("embed_tree_two_stage: bad p");

  if (tree.m == 1) {
    EmbedResult res;
    res.ok = true;
    res.route = EmbedRoute::degraded_greedy;
    res.embedding = {x};
    return res;
  }

  const double n = static_cast<double>(g.n);
  const double log3 = std::pow(std::log(n), 3.0);
  const double leaf_threshold = n / log3;
  const double q = 1.0 - std::sqrt(1.0 - p);  // (1-p) = (1-q)^2

  if (static_cast<double>(count_leaves(tree)) >= leaf_threshold) {
    const long leaf_target = std::max(1L, static_cast<long>(std::ceil(n / (2.0 * log3))));
    return embed_many_leaves(tree, g, q, x, v, leaf_target, rng);
  }

  const int bare_len = static_cast<int>(std::ceil(log3 / 5.0));
  if (bare_len < 2) {
    EmbedResult res;
    res.route = EmbedRoute::degraded_greedy;
    res.deviation = true;
    GreedyResult direct = greedy_bfs_embed(tree, g, p, v, x, rng);
    if (!direct.ok) {
      res.fail_stage = "greedy";
      return res;
    }
    res.embedding = std::move(direct.embedding);
    res.ok = true;
    return res;
  }
  const long path_target = std::max(1L, static_cast<long>(std::ceil(n / log3)));
  return embed_few_leaves(tree, g, p, q, x, v, bare_len, path_target, rng);
}

SpanningOutcome pack_spanning(const std::vector<Tree>& trees, int n, double p, double eps,
                              Backend backend, Rng& rng) {
  int delta = 1;
  for (const Tree& t : trees) {
    if (t.m != n) throw std::invalid_argument("pack_spanning: trees must span the host");
    delta = std::max(delta, t.max_degree());
  }
  SpanningOutcome out;
  out.config = make_spanning_config(n, p, eps, delta);
  out.records.assign(trees.size(), {});
  out.embeddings.assign(trees.size(), {});
  if (trees.empty()) {
    out.stage1_ok = true;
    out.success = true;
    return out;
  }

  // split every tree into a large and a small part sharing one vertex;
  // stage 1 packs the large parts rooted at the shared vertex so the
  // stage-2 anchor is pinned
  std::vector<TreePartition> parts;
  parts.reserve(trees.size());
  std::vector<Tree> large_parts;
  PackOptions opts;
  for (const Tree& t : trees) {
    parts.push_back(partition_tree(t, out.config.alpha));
    large_parts.push_back(parts.back().large);
    opts.roots.push_back(parts.back().shared_in_large);
    opts.designated.push_back(parts.back().shared_in_large);
  }

  out.stage1 = pack(large_parts, n, out.config.p_prime, backend, rng, opts);
  out.stage1_ok = out.stage1.success;
  if (!out.stage1.valid_packing) {
    out.success = false;
    return out;
  }

  const double logn = std::log(static_cast<double>(n));
  const double log5 = std::pow(logn, 5.0);
  std::set<std::pair<int, int>> used;  // H1 union H2
  for (const UsedEdge& e : out.stage1.used_edges) used.insert({e.u, e.w});
  std::vector<int> h2_degree(n, 0);
  const double h2_cap = static_cast<double>(n) * p;

  for (std::size_t s = 0; s < trees.size(); ++s) {
    SpanningTreeRecord& rec = out.records[s];
    if (!check_degree_cap(h2_degree, h2_cap)) {
      out.aborted_at = static_cast<int>(s);
      out.abort_cause = "h2_degree_cap";
      break;
    }
    rec.reached = true;

    const TreePartition& part = parts[s];
    const std::vector<int>& w_set = out.stage1.w_sets[s];  // sorted
    rec.w_size = static_cast<int>(w_set.size());
    if (w_set.size() != part.small_vertices.size()) {
      throw std::logic_error("pack_spanning: |W_s| != |V(S_s)|");
    }

    // host graph on W_s: complete minus every edge used so far
    HostGraph gs = HostGraph::empty(rec.w_size);
    for (int i = 0; i < rec.w_size; ++i) {
      for (int j = i + 1; j < rec.w_size; ++j) {
        if (!used.count({w_set[i], w_set[j]})) gs.add_edge(i, j);
      }
    }

    rec.qs = static_cast<double>(out.config.delta) * log5 / static_cast<double>(rec.w_size);
    rec.qs_clamped = rec.qs > 1.0;
    const double qs_eff = std::min(1.0, rec.qs);

    const int anchor_host = out.stage1.embeddings[s][part.shared_in_large];
    const int x_local = static_cast<int>(
        std::lower_bound(w_set.begin(), w_set.end(), anchor_host) - w_set.begin());

    EmbedResult emb =
        embed_tree_two_stage(part.small, gs, qs_eff, x_local, part.shared_in_small, rng);
    rec.route = emb.route;
    rec.deviation = emb.deviation;
    rec.fail_stage = emb.fail_stage;
    if (!emb.ok) {
      out.aborted_at = static_cast<int>(s);
      out.abort_cause = "stage2_embedding";
      break;
    }
    rec.embedded = true;

    // assemble the full T_s map and fold the small image into H2
    std::vector<int>& full = out.embeddings[s];
    full.assign(trees[s].m, -1);
    for (std::size_t j = 0; j < part.large_vertices.size(); ++j) {
      full[part.large_vertices[j]] = out.stage1.embeddings[s][j];
    }
    for (std::size_t j = 0; j < part.small_vertices.size(); ++j) {
      full[part.small_vertices[j]] = w_set[emb.embedding[j]];
    }
    for (auto [a, b] : part.small.edges()) {
      const int ua = w_set[emb.embedding[a]], ub = w_set[emb.embedding[b]];
      used.insert({std::min(ua, ub), std::max(ua, ub)});
      h2_degree[ua] += 1;
      h2_degree[ub] += 1;
    }
  }

  out.success = out.stage1_ok && out.aborted_at < 0;
  for (const auto& rec : out.records) out.success = out.success && rec.embedded;
  return out;
}

}  // namespace treepack
