#include "treepack/graph.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace treepack {

HostGraph HostGraph::empty(int n) {
  HostGraph g;
  g.n = n;
  g.adj.assign(n, {});
  return g;
}

HostGraph HostGraph::complete(int n) {
  HostGraph g = empty(n);
  for (int u = 0; u < n; ++u) {
    g.adj[u].reserve(n - 1);
    for (int w = 0; w < n; ++w) {
      if (w != u) g.adj[u].push_back(w);
    }
  }
  return g;
}

void HostGraph::add_edge(int u, int w) {
  if (u == w || u < 0 || w < 0 || u >= n || w >= n) {
    throw std::invalid_argument("HostGraph::add_edge: bad endpoints");
  }
  auto it = std::lower_bound(adj[u].begin(), adj[u].end(), w);
  if (it != adj[u].end() && *it == w) return;
  adj[u].insert(it, w);
  adj[w].insert(std::lower_bound(adj[w].begin(), adj[w].end(), u), u);
}

bool HostGraph::has_edge(int u, int w) const {
  return std::binary_search(adj[u].begin(), adj[u].end(), w);
}

long HostGraph::edge_count() const {
  long total = 0;
  for (const auto& nb : adj) total += static_cast<long>(nb.size());
  return total / 2;
}

HostGraph sample_subgraph(const HostGraph& g, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_subgraph: p in [0,1]");
  HostGraph out = HostGraph::empty(g.n);
  for (int u = 0; u < g.n; ++u) {
    for (int w : g.adj[u]) {
      if (w > u && rng.bernoulli(p)) out.add_edge(u, w);
    }
  }
  return out;
}

void save_graph(std::ostream& out, const HostGraph& g) {
  out << "graph n=" << g.n << "\n";
  for (int u = 0; u < g.n; ++u) {
    for (int w : g.adj[u]) {
      if (u < w) out << u << " " << w << "\n";
    }
  }
}

HostGraph load_graph(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::invalid_argument("load_graph: empty input");
  const std::string prefix = "graph n=";
  if (header.rfind(prefix, 0) != 0) throw std::invalid_argument("load_graph: bad header");
  HostGraph g = HostGraph::empty(std::stoi(header.substr(prefix.size())));
  int u, w;
  while (in >> u >> w) g.add_edge(u, w);
  return g;
}

namespace {

std::vector<int> mask_to_set(std::uint32_t mask) {
  std::vector<int> out;
  while (mask) {
    int v = std::countr_zero(mask);
    out.push_back(v);
    mask &= mask - 1;
  }
  return out;
}

struct BitGraph {
  int n;
  std::uint32_t wmask = 0;
  std::vector<std::uint32_t> rows;

  explicit BitGraph(const HostGraph& g, const std::vector<int>& W) : n(g.n), rows(g.n, 0) {
    for (int u = 0; u < n; ++u) {
      for (int w : g.adj[u]) rows[u] |= 1u << w;
    }
    for (int w : W) wmask |= 1u << w;
  }

  std::uint32_t neighborhood(std::uint32_t xmask) const {
    std::uint32_t nb = 0;
    std::uint32_t rest = xmask;
    while (rest) {
      nb |= rows[std::countr_zero(rest)];
      rest &= rest - 1;
    }
    return nb;
  }

  bool e1_ok(std::uint32_t xmask, double d) const {
    const int grown = std::popcount(neighborhood(xmask) & wmask);
    return grown >= d * std::popcount(xmask);
  }

  bool e2_ok(std::uint32_t xmask, std::uint32_t ymask) const {
    return (neighborhood(xmask) & ymask) != 0;
  }
};

// next subset of the same popcount (Gosper's hack) restricted under limit
bool next_same_size(std::uint32_t& v, std::uint32_t limit) {
  const std::uint32_t c = v & -v;
  const std::uint32_t r = v + c;
  if (r >= limit) return false;
  v = (((r ^ v) >> 2) / c) | r;
  return v < limit;
}

std::uint32_t first_of_size(int k) { return k == 0 ? 0 : (1u << k) - 1; }

std::uint32_t random_subset_of(std::vector<int> pool, int k, Rng& rng) {
  std::uint32_t mask = 0;
  for (int i = 0; i < k; ++i) {
    int idx = rng.below_int(static_cast<int>(pool.size()));
    mask |= 1u << pool[idx];
    pool[idx] = pool.back();
    pool.pop_back();
  }
  return mask;
}

}  // namespace

ExpansionVerdict check_expansion(const HostGraph& g, const ExpansionQuery& q, Rng* rng) {
  if (!(q.d >= 1.0)) throw std::invalid_argument("check_expansion: need d >= 1");
  for (int w : q.W) {
    if (w < 0 || w >= g.n) throw std::invalid_argument("check_expansion: W not within V(G)");
  }
  const int n = g.n;
  const double wsize = static_cast<double>(q.W.size());
  const double small_limit = wsize / (2.0 * q.d);  // E1: 1 <= |X| < small_limit
  // E2 threshold: the smallest admissible set size; checking exactly this
  // size is complete because E2 for supersets follows from subsets failing
  int e2_size = static_cast<int>(std::ceil(small_limit));
  if (static_cast<double>(e2_size) < small_limit) ++e2_size;

  BitGraph bg(g, q.W);
  ExpansionVerdict verdict;

  if (q.mode == ExpansionMode::exact) {
    if (n > kExpansionExactLimit) {
      throw std::invalid_argument("check_expansion: exact mode limited to n <= 16");
    }
    const std::uint32_t full = (n == 32) ? 0xffffffffu : ((1u << n) - 1);
    // (E1): every nonempty X below the size limit
    int max_x = std::min(n, static_cast<int>(std::ceil(small_limit)) - 1);
    if (static_cast<double>(max_x) >= small_limit) --max_x;
    for (int k = 1; k <= max_x; ++k) {
      std::uint32_t x = first_of_size(k);
      if (x > full) break;
      do {
        if (!bg.e1_ok(x, q.d)) {
          verdict.outcome = ExpansionOutcome::fails;
          verdict.condition = "E1";
          verdict.witness_x = mask_to_set(x);
          return verdict;
        }
      } while (next_same_size(x, full + 1));
    }
    // (E2): disjoint pairs at the threshold size
    if (e2_size >= 1 && 2 * e2_size <= n) {
      std::uint32_t x = first_of_size(e2_size);
      do {
        // enumerate Y of the same size inside the complement of X
        std::vector<int> rest = mask_to_set(full & ~x);
        const int r = static_cast<int>(rest.size());
        std::uint32_t pick = first_of_size(e2_size);
        const std::uint32_t pick_limit = 1u << r;
        do {
          std::uint32_t y = 0;
          std::uint32_t bits = pick;
          while (bits) {
            y |= 1u << rest[std::countr_zero(bits)];
            bits &= bits - 1;
          }
          if (!bg.e2_ok(x, y)) {
            verdict.outcome = ExpansionOutcome::fails;
            verdict.condition = "E2";
            verdict.witness_x = mask_to_set(x);
            verdict.witness_y = mask_to_set(y);
            return verdict;
          }
        } while (next_same_size(pick, pick_limit));
      } while (next_same_size(x, full + 1));
    }
    verdict.outcome = ExpansionOutcome::holds;
    return verdict;
  }

  // sampled mode: one-sided search for a counterexample
  if (rng == nullptr) throw std::invalid_argument("check_expansion: sampled mode needs an rng");
  if (n > 32) throw std::invalid_argument("check_expansion: sampled mode uses bitmasks, n <= 32");
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  int max_x = std::min(n, static_cast<int>(std::ceil(small_limit)) - 1);
  if (static_cast<double>(max_x) >= small_limit) --max_x;
  for (int trial = 0; trial < q.trial_budget; ++trial) {
    if (max_x >= 1) {
      const int k = 1 + rng->below_int(max_x);
      const std::uint32_t x = random_subset_of(all, k, *rng);
      if (!bg.e1_ok(x, q.d)) {
        verdict.outcome = ExpansionOutcome::fails;
        verdict.condition = "E1";
        verdict.witness_x = mask_to_set(x);
        return verdict;
      }
    }
    if (e2_size >= 1 && 2 * e2_size <= n) {
      const std::uint32_t x = random_subset_of(all, e2_size, *rng);
      std::vector<int> rest = mask_to_set(~x & ((n == 32) ? 0xffffffffu : ((1u << n) - 1)));
      const std::uint32_t y = random_subset_of(rest, e2_size, *rng);
      if (!bg.e2_ok(x, y)) {
        verdict.outcome = ExpansionOutcome::fails;
        verdict.condition = "E2";
        verdict.witness_x = mask_to_set(x);
        verdict.witness_y = mask_to_set(y);
        return verdict;
      }
    }
  }
  verdict.outcome = ExpansionOutcome::sampled_no_counterexample;
  return verdict;
}

namespace {

// Hopcroft-Karp on the blow-up of the demand instance: left clone (y, copy)
// for copy < demand[y], right vertices as-is.
struct BlowupMatcher {
  const MatchingInstance& inst;
  std::vector<int> clone_owner;            // clone -> y
  std::vector<std::vector<int>> clone_adj; // clone -> right ids
  std::vector<int> match_left, match_right;
  std::vector<int> layer;

  explicit BlowupMatcher(const MatchingInstance& mi) : inst(mi) {
    for (int y = 0; y < mi.left; ++y) {
      for (int c = 0; c < mi.demand[y]; ++c) {
        clone_owner.push_back(y);
        clone_adj.push_back(mi.adj[y]);
      }
    }
    match_left.assign(clone_adj.size(), -1);
    match_right.assign(mi.right, -1);
  }

  bool bfs_layers() {
    layer.assign(clone_adj.size(), -1);
    std::vector<int> frontier;
    for (std::size_t c = 0; c < clone_adj.size(); ++c) {
      if (match_left[c] < 0) {
        layer[c] = 0;
        frontier.push_back(static_cast<int>(c));
      }
    }
    bool reachable_free = false;
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int c : frontier) {
        for (int z : clone_adj[c]) {
          int c2 = match_right[z];
          if (c2 < 0) {
            reachable_free = true;
          } else if (layer[c2] < 0) {
            layer[c2] = layer[c] + 1;
            next.push_back(c2);
          }
        }
      }
      frontier = std::move(next);
    }
    return reachable_free;
  }

  bool dfs_augment(int c) {
    for (int z : clone_adj[c]) {
      int c2 = match_right[z];
      if (c2 < 0 || (layer[c2] == layer[c] + 1 && dfs_augment(c2))) {
        match_left[c] = z;
        match_right[z] = c;
        return true;
      }
    }
    layer[c] = -1;
    return false;
  }

  bool run() {
    std::size_t matched = 0;
    while (bfs_layers()) {
      for (std::size_t c = 0; c < clone_adj.size(); ++c) {
        if (match_left[c] < 0 && dfs_augment(static_cast<int>(c))) ++matched;
      }
    }
    return matched == clone_adj.size();
  }
};

}  // namespace

MatchingResult generalized_matching(const MatchingInstance& inst) {
  if (static_cast<int>(inst.demand.size()) != inst.left ||
      static_cast<int>(inst.adj.size()) != inst.left) {
    throw std::invalid_argument("generalized_matching: malformed instance");
  }
  long total = 0;
  for (int d : inst.demand) {
    if (d < 0) throw std::invalid_argument("generalized_matching: negative demand");
    total += d;
  }
  MatchingResult res;
  if (total > inst.right) return res;  // necessary condition fails

  BlowupMatcher hk(inst);
  if (!hk.run()) return res;
  res.feasible = true;
  res.assignment.assign(inst.left, {});
  for (std::size_t c = 0; c < hk.clone_owner.size(); ++c) {
    res.assignment[hk.clone_owner[c]].push_back(hk.match_left[c]);
  }
  for (auto& a : res.assignment) std::sort(a.begin(), a.end());
  return res;
}

namespace {

struct PathSearch {
  const HostGraph& g;
  std::vector<char> used;
  Rng& rng;
  long steps = 0;
  long step_budget;

  PathSearch(const HostGraph& graph, Rng& r, long budget) : g(graph), used(graph.n, 0), rng(r), step_budget(budget) {}

  // extend from cur to target with exactly rem edges through unused vertices
  bool extend(int cur, int target, int rem, std::vector<int>& path) {
    if (++steps > step_budget) return false;
    if (rem == 1) {
      if (g.has_edge(cur, target)) {
        path.push_back(target);
        return true;
      }
      return false;
    }
    std::vector<int> cands;
    for (int w : g.adj[cur]) {
      if (!used[w] && w != target) cands.push_back(w);
    }
    rng.shuffle(cands);
    for (int w : cands) {
      used[w] = 1;
      path.push_back(w);
      if (extend(w, target, rem - 1, path)) return true;
      path.pop_back();
      used[w] = 0;
    }
    return false;
  }
};

}  // namespace

ConnectResult connect_pairs(const HostGraph& g, const std::vector<std::pair<int, int>>& pairs,
                            int ell, const std::vector<int>& W, bool cover_all, Rng& rng,
                            int restart_budget) {
  if (ell < 2) throw std::invalid_argument("connect_pairs: need ell >= 2");
  const long interior_per_path = ell - 2;
  if (cover_all && static_cast<long>(W.size()) != interior_per_path * static_cast<long>(pairs.size())) {
    throw std::invalid_argument("connect_pairs: |W| must equal (ell-2)*pairs for full coverage");
  }
  std::vector<char> endpoint(g.n, 0), in_w(g.n, 0);
  for (auto [x, y] : pairs) {
    if (endpoint[x] || endpoint[y] || x == y) {
      throw std::invalid_argument("connect_pairs: pairs must be pairwise disjoint");
    }
    endpoint[x] = endpoint[y] = 1;
  }
  for (int w : W) {
    if (endpoint[w]) throw std::invalid_argument("connect_pairs: W overlaps pair endpoints");
    in_w[w] = 1;
  }

  ConnectResult result;
  std::vector<int> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  for (int attempt = 0; attempt < restart_budget; ++attempt) {
    result.restarts_used = attempt + 1;
    rng.shuffle(order);
    PathSearch search(g, rng, 50L * g.n * ell + 1000);
    // interiors may only come from W; block everything else
    for (int v = 0; v < g.n; ++v) search.used[v] = !in_w[v];
    std::vector<std::vector<int>> paths(pairs.size());
    bool ok = true;
    for (int idx : order) {
      auto [x, y] = pairs[idx];
      std::vector<int> path{x};
      if (!search.extend(x, y, ell - 1, path)) {
        ok = false;
        break;
      }
      paths[idx] = std::move(path);
    }
    if (!ok) continue;
    if (cover_all) {
      // arithmetic guarantees exact coverage once every pair is routed
      long used_w = 0;
      for (const auto& p : paths) used_w += static_cast<long>(p.size()) - 2;
      if (used_w != static_cast<long>(W.size())) continue;
    }
    result.ok = true;
    result.paths = std::move(paths);
    return result;
  }
  return result;
}

}  // namespace treepack
