#include "treepack/tree.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace treepack {

int Tree::max_degree() const {
  int d = 0;
  for (const auto& nb : adj) d = std::max(d, static_cast<int>(nb.size()));
  return d;
}

std::vector<std::pair<int, int>> Tree::edges() const {
  std::vector<std::pair<int, int>> es;
  es.reserve(m > 0 ? m - 1 : 0);
  for (int u = 0; u < m; ++u) {
    for (int w : adj[u]) {
      if (u < w) es.emplace_back(u, w);
    }
  }
  std::sort(es.begin(), es.end());
  return es;
}

Tree make_tree(int m, const std::vector<std::pair<int, int>>& edges) {
  if (m < 1) throw std::invalid_argument("make_tree: need at least one vertex");
  Tree t;
  t.m = m;
  t.adj.assign(m, {});
  for (auto [u, w] : edges) {
    if (u < 0 || u >= m || w < 0 || w >= m || u == w) {
      throw std::invalid_argument("make_tree: edge endpoint out of range");
    }
    t.adj[u].push_back(w);
    t.adj[w].push_back(u);
  }
  for (auto& nb : t.adj) std::sort(nb.begin(), nb.end());
  if (!is_valid_tree(t)) throw std::invalid_argument("make_tree: edges do not form a tree");
  return t;
}

bool is_valid_tree(const Tree& t) {
  if (t.m < 1 || static_cast<int>(t.adj.size()) != t.m) return false;
  long edge_count = 0;
  for (int u = 0; u < t.m; ++u) {
    for (int w : t.adj[u]) {
      if (w < 0 || w >= t.m || w == u) return false;
      ++edge_count;
    }
  }
  if (edge_count != 2L * (t.m - 1)) return false;
  // connectivity; edge count m-1 + connected implies acyclic
  std::vector<char> seen(t.m, 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : t.adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        queue.push_back(w);
      }
    }
  }
  return reached == t.m;
}

BfsLayout bfs_order(const Tree& t, int root) {
  if (!is_valid_tree(t)) throw std::invalid_argument("bfs_order: input is not a tree");
  if (root < 0 || root >= t.m) throw std::invalid_argument("bfs_order: root out of range");

  BfsLayout lay;
  const int m = t.m;
  lay.order.reserve(m);
  lay.pos.assign(m, -1);
  lay.parent.assign(m, -1);

  std::deque<int> queue{root};
  lay.pos[root] = 0;
  lay.order.push_back(root);
  std::vector<int> parent_label(m, -1);
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    // adjacency lists are sorted, so children get ascending ids
    for (int w : t.adj[v]) {
      if (lay.pos[w] >= 0) continue;
      lay.pos[w] = static_cast<int>(lay.order.size());
      parent_label[lay.pos[w]] = lay.pos[v];
      lay.order.push_back(w);
      queue.push_back(w);
    }
  }
  lay.parent = std::move(parent_label);

  lay.child_count.assign(m, 0);
  lay.first_child.assign(m, -1);
  for (int i = 1; i < m; ++i) {
    int p = lay.parent[i];
    if (lay.child_count[p] == 0) lay.first_child[p] = i;
    ++lay.child_count[p];
  }
  for (int i = 0; i < m; ++i) {
    if (i == 0 || lay.child_count[i] > 0) lay.internal.push_back(i);
  }
  return lay;
}

int BfsLayout::pred_in_internal(int i) const {
  auto it = std::lower_bound(internal.begin(), internal.end(), i);
  if (it == internal.begin()) return -1;
  return *std::prev(it);
}

int BfsLayout::succ_in_internal(int i) const {
  auto it = std::upper_bound(internal.begin(), internal.end(), i);
  if (it == internal.end()) return -1;
  return *it;
}

namespace {

// induced subtree on the given original-id vertex set (which must be
// connected in t); returns the tree plus local->original map
std::pair<Tree, std::vector<int>> induced_subtree(const Tree& t, std::vector<int> vertices) {
  std::sort(vertices.begin(), vertices.end());
  std::vector<int> local(t.m, -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<int>(i);
  std::vector<std::pair<int, int>> edges;
  for (int v : vertices) {
    for (int w : t.adj[v]) {
      if (v < w && local[w] >= 0) edges.emplace_back(local[v], local[w]);
    }
  }
  Tree sub = make_tree(static_cast<int>(vertices.size()), edges);
  return {std::move(sub), std::move(vertices)};
}

}  // namespace

TreePartition partition_tree(const Tree& t, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("partition_tree: alpha must be in [0, 1)");
  }
  if (!is_valid_tree(t)) throw std::invalid_argument("partition_tree: input is not a tree");

  const int m = t.m;
  const long threshold = static_cast<long>(alpha * m);  // floor(alpha*m)

  // root at vertex 0; subtree sizes and depths by one BFS pass
  BfsLayout lay = bfs_order(t, 0);
  std::vector<long> size(m, 1);
  std::vector<int> depth(m, 0);
  for (int i = 1; i < m; ++i) depth[i] = depth[lay.parent[i]] + 1;
  for (int i = m - 1; i >= 1; --i) size[lay.parent[i]] += size[i];

  // deepest label whose subtree exceeds the threshold; among ties take the
  // smallest original vertex id so the construction is deterministic
  int chosen = 0;
  int best_depth = -1, best_id = t.m;
  for (int i = 0; i < m; ++i) {
    if (size[i] > threshold) {
      if (depth[i] > best_depth || (depth[i] == best_depth && lay.order[i] < best_id)) {
        best_depth = depth[i];
        best_id = lay.order[i];
        chosen = i;
      }
    }
  }

  // children of the chosen vertex occupy consecutive labels and ascend by
  // original id; take the minimal prefix whose subtree sizes reach the
  // threshold
  long acc = 0;
  std::vector<int> taken;
  const int fc = lay.first_child[chosen];
  for (int c = fc; fc != -1 && c < fc + lay.child_count[chosen]; ++c) {
    if (acc >= threshold) break;
    acc += size[c];
    taken.push_back(c);
  }

  // S = chosen vertex plus the taken child subtrees
  std::vector<char> in_small(m, 0);
  in_small[chosen] = 1;
  std::vector<int> stack(taken);
  for (int c : taken) in_small[c] = 1;
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    const int first = lay.first_child[i];
    for (int c = first; first != -1 && c < first + lay.child_count[i]; ++c) {
      in_small[c] = 1;
      stack.push_back(c);
    }
  }

  std::vector<int> small_vs, large_vs;
  for (int i = 0; i < m; ++i) {
    int v = lay.order[i];
    if (in_small[i]) small_vs.push_back(v);
    if (!in_small[i] || i == chosen) large_vs.push_back(v);
  }

  TreePartition part;
  part.shared = lay.order[chosen];
  auto [small_tree, small_map] = induced_subtree(t, small_vs);
  auto [large_tree, large_map] = induced_subtree(t, large_vs);
  part.small = std::move(small_tree);
  part.small_vertices = std::move(small_map);
  part.large = std::move(large_tree);
  part.large_vertices = std::move(large_map);
  part.shared_in_small = static_cast<int>(
      std::lower_bound(part.small_vertices.begin(), part.small_vertices.end(), part.shared) -
      part.small_vertices.begin());
  part.shared_in_large = static_cast<int>(
      std::lower_bound(part.large_vertices.begin(), part.large_vertices.end(), part.shared) -
      part.large_vertices.begin());
  return part;
}

int count_leaves(const Tree& t) {
  if (t.m == 1) return 0;
  int leaves = 0;
  for (int v = 0; v < t.m; ++v) {
    if (t.degree(v) == 1) ++leaves;
  }
  return leaves;
}

std::vector<std::vector<int>> find_bare_paths(const Tree& t, int k) {
  if (k < 1) throw std::invalid_argument("find_bare_paths: k must be >= 1");
  std::vector<std::vector<int>> pieces;
  if (t.m < 2) return pieces;

  // maximal bare segments: walk from every non-degree-2 vertex; each edge
  // belongs to exactly one segment
  std::vector<std::vector<char>> edge_done(t.m);
  for (int v = 0; v < t.m; ++v) edge_done[v].assign(t.adj[v].size(), 0);
  auto mark = [&](int u, int w) {
    auto it = std::lower_bound(t.adj[u].begin(), t.adj[u].end(), w);
    edge_done[u][it - t.adj[u].begin()] = 1;
  };
  auto done = [&](int u, int w) {
    auto it = std::lower_bound(t.adj[u].begin(), t.adj[u].end(), w);
    return edge_done[u][it - t.adj[u].begin()] != 0;
  };

  for (int v = 0; v < t.m; ++v) {
    if (t.degree(v) == 2) continue;
    for (int w0 : t.adj[v]) {
      if (done(v, w0)) continue;
      std::vector<int> seg{v};
      int prev = v, cur = w0;
      mark(prev, cur);
      mark(cur, prev);
      while (t.degree(cur) == 2) {
        seg.push_back(cur);
        int nxt = (t.adj[cur][0] == prev) ? t.adj[cur][1] : t.adj[cur][0];
        prev = cur;
        cur = nxt;
        mark(prev, cur);
        mark(cur, prev);
      }
      seg.push_back(cur);
      const int len = static_cast<int>(seg.size()) - 1;  // edges
      for (int j = 0; j + k <= len; j += k) {
        pieces.emplace_back(seg.begin() + j, seg.begin() + j + k + 1);
      }
    }
  }
  return pieces;
}

bool degree_one_or_delta_feasible(int m, int delta) {
  if (m < 2 || delta < 1) return false;
  if (m == 2) return true;
  if (delta < 2) return false;  // beyond an edge, some vertex needs degree > 1
  return (m - 2) % (delta - 1) == 0;
}

Tree tree_from_prufer(const std::vector<int>& seq, int m) {
  if (m < 1) throw std::invalid_argument("tree_from_prufer: need m >= 1");
  if (static_cast<int>(seq.size()) != std::max(0, m - 2)) {
    throw std::invalid_argument("tree_from_prufer: sequence length must be m-2");
  }
  if (m == 1) return make_tree(1, {});
  std::vector<int> deg(m, 1);
  for (int s : seq) {
    if (s < 0 || s >= m) throw std::invalid_argument("tree_from_prufer: entry out of range");
    ++deg[s];
  }
  std::vector<std::pair<int, int>> edges;
  edges.reserve(m - 1);
  // classic pointer scan over the smallest current leaf
  int ptr = 0;
  while (deg[ptr] != 1) ++ptr;
  int leaf = ptr;
  for (int s : seq) {
    edges.emplace_back(leaf, s);
    if (--deg[s] == 1 && s < ptr) {
      leaf = s;
    } else {
      ++ptr;
      while (deg[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.emplace_back(leaf, m - 1);
  return make_tree(m, edges);
}

namespace {

Tree gen_path(int m) {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i + 1 < m; ++i) es.emplace_back(i, i + 1);
  return make_tree(m, es);
}

Tree gen_star(int m) {
  std::vector<std::pair<int, int>> es;
  for (int i = 1; i < m; ++i) es.emplace_back(0, i);
  return make_tree(m, es);
}

Tree gen_caterpillar(const TreeSpec& spec) {
  const int m = spec.m;
  int spine = spec.spine > 0 ? spec.spine : std::max(2, m / 2);
  if (spine > m) throw std::invalid_argument("gen_tree: caterpillar spine larger than tree");
  const int cap = spec.max_degree;
  std::vector<std::pair<int, int>> es;
  std::vector<int> deg(m, 0);
  for (int i = 0; i + 1 < spine; ++i) {
    es.emplace_back(i, i + 1);
    ++deg[i];
    ++deg[i + 1];
  }
  int next = spine;
  int host = 0;
  while (next < m) {
    while (host < spine && deg[host] >= cap) ++host;
    if (host >= spine) throw std::invalid_argument("gen_tree: caterpillar infeasible under degree cap");
    es.emplace_back(host, next);
    ++deg[host];
    ++next;
    host = (host + 1 < spine) ? host + 1 : 0;  // round-robin legs
  }
  return make_tree(m, es);
}

Tree gen_spider(const TreeSpec& spec, Rng&) {
  const int m = spec.m;
  int legs = spec.legs > 0 ? spec.legs : std::min(m - 1, std::max(2, spec.max_degree));
  if (legs > m - 1) throw std::invalid_argument("gen_tree: spider with more legs than non-center vertices");
  if (legs > spec.max_degree) throw std::invalid_argument("gen_tree: spider legs exceed degree cap");
  std::vector<std::pair<int, int>> es;
  int next = 1;
  for (int leg = 0; leg < legs; ++leg) {
    // near-equal leg lengths
    int len = (m - 1) / legs + (leg < (m - 1) % legs ? 1 : 0);
    int prev = 0;
    for (int j = 0; j < len; ++j) {
      es.emplace_back(prev, next);
      prev = next++;
    }
  }
  return make_tree(m, es);
}

Tree gen_random_prufer(const TreeSpec& spec, Rng& rng) {
  const int m = spec.m;
  const int cap = spec.max_degree;
  if (m <= 2) return gen_path(m);
  if (cap < 2) throw std::invalid_argument("gen_tree: random tree needs degree cap >= 2");
  // each appearance in the sequence adds one degree on top of the baseline 1,
  // so capacity per vertex is cap-1 appearances
  std::vector<int> remaining(m, cap - 1);
  std::vector<int> eligible(m);
  std::iota(eligible.begin(), eligible.end(), 0);
  std::vector<int> seq;
  seq.reserve(m - 2);
  for (int i = 0; i < m - 2; ++i) {
    int idx = rng.below_int(static_cast<int>(eligible.size()));
    int v = eligible[idx];
    seq.push_back(v);
    if (--remaining[v] == 0) {
      eligible[idx] = eligible.back();
      eligible.pop_back();
    }
  }
  return tree_from_prufer(seq, m);
}

Tree gen_degree_one_or_delta(const TreeSpec& spec, Rng& rng) {
  const int m = spec.m, delta = spec.max_degree;
  if (!degree_one_or_delta_feasible(m, delta)) {
    std::ostringstream msg;
    msg << "gen_tree: no tree with all degrees in {1," << delta << "} on " << m
        << " vertices (need m == 2 mod delta-1)";
    throw std::invalid_argument(msg.str());
  }
  std::vector<std::pair<int, int>> es{{0, 1}};
  std::vector<int> leaves{0, 1};
  int next = 2;
  while (next < m) {
    // grow a random leaf to degree delta by attaching delta-1 fresh leaves
    int idx = rng.below_int(static_cast<int>(leaves.size()));
    int host = leaves[idx];
    leaves[idx] = leaves.back();
    leaves.pop_back();
    for (int j = 0; j < delta - 1; ++j) {
      es.emplace_back(host, next);
      leaves.push_back(next);
      ++next;
    }
  }
  return make_tree(m, es);
}

}  // namespace

Tree gen_tree(const TreeSpec& spec, Rng& rng) {
  if (spec.m < 1) throw std::invalid_argument("gen_tree: need m >= 1");
  TreeSpec s = spec;
  if (s.max_degree <= 0) s.max_degree = std::max(1, s.m - 1);
  if (s.m == 1) return make_tree(1, {});
  if (s.m == 2) return make_tree(2, {{0, 1}});
  if (s.max_degree < 2) throw std::invalid_argument("gen_tree: degree cap < 2 with m > 2");

  Tree t;
  switch (s.family) {
    case TreeFamily::path:
      t = gen_path(s.m);
      break;
    case TreeFamily::star:
      if (s.m - 1 > s.max_degree) throw std::invalid_argument("gen_tree: star exceeds degree cap");
      t = gen_star(s.m);
      break;
    case TreeFamily::caterpillar:
      t = gen_caterpillar(s);
      break;
    case TreeFamily::spider:
      t = gen_spider(s, rng);
      break;
    case TreeFamily::random_prufer:
      t = gen_random_prufer(s, rng);
      break;
    case TreeFamily::degree_one_or_delta:
      t = gen_degree_one_or_delta(s, rng);
      break;
  }
  if (t.max_degree() > s.max_degree) {
    throw std::invalid_argument("gen_tree: generated tree violates degree cap");
  }
  return t;
}

void save_tree(std::ostream& out, const Tree& t) {
  out << "tree m=" << t.m << "\n";
  for (auto [u, w] : t.edges()) out << u << " " << w << "\n";
}

Tree load_tree(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::invalid_argument("load_tree: empty input");
  const std::string prefix = "tree m=";
  if (header.rfind(prefix, 0) != 0) throw std::invalid_argument("load_tree: bad header");
  int m = std::stoi(header.substr(prefix.size()));
  std::vector<std::pair<int, int>> es;
  int u, w;
  while (in >> u >> w) es.emplace_back(u, w);
  if (static_cast<int>(es.size()) != m - 1) {
    throw std::invalid_argument("load_tree: wrong edge count");
  }
  return make_tree(m, es);
}

}  // namespace treepack
