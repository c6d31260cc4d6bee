#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "treepack/probability.hpp"
#include "treepack/tree.hpp"

using namespace treepack;

namespace {

// direct scan of the output permutation: consecutive child labels above the
// parent (O1), child blocks ordered like their parents (O2), telescoping of
// the first-child labels, child counts summing to m-1
void check_layout_properties(const Tree& t, const BfsLayout& lay) {
  const int m = t.m;
  REQUIRE(static_cast<int>(lay.order.size()) == m);

  std::vector<std::vector<int>> child_labels(m);
  for (int i = 1; i < m; ++i) {
    CHECK(lay.parent[i] < i);
    child_labels[lay.parent[i]].push_back(i);
  }
  long total_children = 0;
  for (int i = 0; i < m; ++i) {
    const auto& ch = child_labels[i];
    total_children += static_cast<long>(ch.size());
    CHECK(static_cast<int>(ch.size()) == lay.child_count[i]);
    if (!ch.empty()) {
      CHECK(lay.first_child[i] == ch.front());
      CHECK(ch.front() > i);  // O1: labels larger than i
      for (std::size_t j = 1; j < ch.size(); ++j) CHECK(ch[j] == ch[j - 1] + 1);  // consecutive
    }
  }
  CHECK(total_children == m - 1);

  // O2 across internal vertices with children
  int prev_block_end = 0;
  for (int i = 0; i < m; ++i) {
    if (child_labels[i].empty()) continue;
    CHECK(child_labels[i].front() == prev_block_end + 1);
    prev_block_end = child_labels[i].back();
  }

  // J contents and ch-telescoping
  for (int i : lay.internal) CHECK((i == 0 || lay.child_count[i] > 0));
  if (m >= 2) {
    CHECK(lay.first_child[0] == 1);
    for (std::size_t k = 0; k + 1 < lay.internal.size(); ++k) {
      const int j = lay.internal[k], nxt = lay.internal[k + 1];
      CHECK(lay.succ_in_internal(j) == nxt);
      CHECK(lay.pred_in_internal(nxt) == j);
      CHECK(lay.first_child[nxt] == lay.first_child[j] + lay.child_count[j]);
    }
  }

  // the ordering really is a BFS ordering of t
  for (int i = 1; i < m; ++i) {
    const int v = lay.order[i], pv = lay.order[lay.parent[i]];
    CHECK(std::binary_search(t.adj[v].begin(), t.adj[v].end(), pv));
  }
}

Tree random_tree(int m, Rng& rng, int cap = 0) {
  TreeSpec spec;
  spec.family = TreeFamily::random_prufer;
  spec.m = m;
  spec.max_degree = cap;
  return gen_tree(spec, rng);
}

void check_partition(const Tree& t, const TreePartition& part, double alpha) {
  const long threshold = static_cast<long>(alpha * t.m);
  const long small_size = static_cast<long>(part.small_vertices.size());
  if (threshold >= 1) {
    CHECK(small_size >= threshold + 1);
    CHECK(small_size <= 2 * threshold);
  } else {
    CHECK(small_size == 1);
  }

  // exactly one shared vertex
  std::set<int> sv(part.small_vertices.begin(), part.small_vertices.end());
  std::set<int> lv(part.large_vertices.begin(), part.large_vertices.end());
  std::vector<int> inter;
  std::set_intersection(sv.begin(), sv.end(), lv.begin(), lv.end(), std::back_inserter(inter));
  REQUIRE(inter.size() == 1);
  CHECK(inter[0] == part.shared);
  CHECK(part.small_vertices[part.shared_in_small] == part.shared);
  CHECK(part.large_vertices[part.shared_in_large] == part.shared);

  // disjoint edge partition covering E(T)
  std::set<std::pair<int, int>> tree_edges;
  for (auto [a, b] : t.edges()) tree_edges.insert({a, b});
  std::set<std::pair<int, int>> covered;
  auto add_edges = [&](const Tree& sub, const std::vector<int>& map) {
    for (auto [a, b] : sub.edges()) {
      int u = map[a], w = map[b];
      if (u > w) std::swap(u, w);
      CHECK(tree_edges.count({u, w}) == 1);
      CHECK(covered.insert({u, w}).second);  // disjointness
    }
  };
  add_edges(part.small, part.small_vertices);
  add_edges(part.large, part.large_vertices);
  CHECK(covered.size() == tree_edges.size());
}

// bare pieces: k edges each, inner vertices of degree exactly 2, pairwise
// edge-disjoint, and inner vertices of one piece appear in no other piece
void check_bare_pieces(const Tree& t, const std::vector<std::vector<int>>& pieces, int k) {
  std::set<std::pair<int, int>> edges_seen;
  std::map<int, int> membership;  // vertex -> piece count
  std::set<int> interiors;
  for (const auto& piece : pieces) {
    REQUIRE(static_cast<int>(piece.size()) == k + 1);
    for (std::size_t j = 0; j + 1 < piece.size(); ++j) {
      int u = piece[j], w = piece[j + 1];
      CHECK(std::binary_search(t.adj[u].begin(), t.adj[u].end(), w));
      if (u > w) std::swap(u, w);
      CHECK(edges_seen.insert({u, w}).second);
    }
    for (std::size_t j = 1; j + 1 < piece.size(); ++j) {
      CHECK(t.degree(piece[j]) == 2);
      interiors.insert(piece[j]);
    }
    for (int v : piece) membership[v] += 1;
  }
  for (int v : interiors) CHECK(membership[v] == 1);
}

}  // namespace

TEST_CASE("bfs ordering on a path") {
  const Tree t = make_tree(3, {{0, 1}, {1, 2}});
  const BfsLayout lay = bfs_order(t, 0);
  CHECK(lay.order == std::vector<int>{0, 1, 2});
  CHECK(lay.internal == std::vector<int>{0, 1});
  CHECK(lay.child_count[0] == 1);
  CHECK(lay.child_count[1] == 1);
  CHECK(lay.first_child[0] == 1);
  CHECK(lay.first_child[1] == 2);
  check_layout_properties(t, lay);
}

TEST_CASE("bfs ordering on a star") {
  const Tree t = make_tree(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  const BfsLayout lay = bfs_order(t, 0);
  CHECK(lay.internal == std::vector<int>{0});
  CHECK(lay.child_count[0] == 4);
  CHECK(lay.first_child[0] == 1);
  check_layout_properties(t, lay);
}

TEST_CASE("bfs ordering properties on random trees") {
  Rng rng(20240811);
  for (int rep = 0; rep < 1000; ++rep) {
    const int m = 2 + rng.below_int(60);
    const Tree t = random_tree(m, rng);
    const int root = rng.below_int(m);
    check_layout_properties(t, bfs_order(t, root));
  }
}

TEST_CASE("bfs ordering rejects non-trees") {
  Tree broken;
  broken.m = 4;
  broken.adj = {{1}, {0}, {3}, {2}};  // two components
  CHECK_THROWS_AS(bfs_order(broken, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_tree(3, {{0, 1}, {0, 1}}), std::invalid_argument);
}

TEST_CASE("layout degree sums against the harmonic bounds") {
  // sum over internal labels of d_i/(n-ch(i)) telescopes into the harmonic
  // gap, and the squared variant is bounded by 1/(n-m) - 1/(n-1)
  Rng rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const int m = 2 + rng.below_int(40);
    const int n = m + 1 + rng.below_int(40);
    const Tree t = random_tree(m, rng);
    const BfsLayout lay = bfs_order(t, rng.below_int(m));
    double sum1 = 0.0, sum2 = 0.0;
    for (int i : lay.internal) {
      const double denom = static_cast<double>(n - lay.first_child[i]);
      sum1 += lay.child_count[i] / denom;
      sum2 += lay.child_count[i] / (denom * denom);
    }
    const HarmonicGap gap = harmonic_gap(n, m);
    CHECK(sum1 <= gap.value + 1e-12);
    CHECK(gap.within);
    CHECK(sum2 <= 1.0 / (n - m) - 1.0 / (n - 1.0) + 1e-12);
  }
}

TEST_CASE("partition of a 10-path at alpha 0.3") {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i < 9; ++i) es.emplace_back(i, i + 1);
  const Tree t = make_tree(10, es);
  const TreePartition part = partition_tree(t, 0.3);
  check_partition(t, part, 0.3);
  CHECK(part.small_vertices.size() == 4);  // proof descent: deepest with size > 3
  CHECK(part.shared == 6);
}

TEST_CASE("partition of a star at alpha 0.3") {
  Rng rng(1);
  const Tree t = gen_tree({TreeFamily::star, 10, 9, 0, 0}, rng);
  const TreePartition part = partition_tree(t, 0.3);
  check_partition(t, part, 0.3);
  CHECK(part.shared == 0);  // the center
  CHECK(part.small_vertices == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("partition at alpha 0 degenerates to a single shared vertex") {
  Rng rng(2);
  const Tree t = random_tree(12, rng);
  const TreePartition part = partition_tree(t, 0.0);
  CHECK(part.small_vertices.size() == 1);
  CHECK(part.small_vertices[0] == part.shared);
  CHECK(part.large_vertices.size() == static_cast<std::size_t>(t.m));
  check_partition(t, part, 0.0);
}

TEST_CASE("partition rejects alpha outside [0,1)") {
  Rng rng(3);
  const Tree t = random_tree(5, rng);
  CHECK_THROWS_AS(partition_tree(t, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(partition_tree(t, -0.1), std::invalid_argument);
}

TEST_CASE("partition window on random trees") {
  Rng rng(99);
  for (double alpha : {0.1, 0.25, 0.4}) {
    for (int rep = 0; rep < 200; ++rep) {
      const int m = 4 + rng.below_int(80);
      const Tree t = random_tree(m, rng);
      check_partition(t, partition_tree(t, alpha), alpha);
    }
  }
}

TEST_CASE("leaf counting") {
  Rng rng(5);
  CHECK(count_leaves(make_tree(2, {{0, 1}})) == 2);
  CHECK(count_leaves(gen_tree({TreeFamily::path, 9, 0, 0, 0}, rng)) == 2);
  CHECK(count_leaves(gen_tree({TreeFamily::star, 9, 0, 0, 0}, rng)) == 8);
  for (int rep = 0; rep < 50; ++rep) {
    const Tree t = random_tree(3 + rng.below_int(60), rng);
    int histogram = 0;  // independent degree histogram
    for (int v = 0; v < t.m; ++v) histogram += t.degree(v) == 1 ? 1 : 0;
    CHECK(count_leaves(t) == histogram);
  }
}

TEST_CASE("bare paths of a 13-vertex path at k=3") {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i < 12; ++i) es.emplace_back(i, i + 1);
  const Tree t = make_tree(13, es);
  const auto pieces = find_bare_paths(t, 3);
  CHECK(pieces.size() == 4);  // greedy along the single segment
  check_bare_pieces(t, pieces, 3);
}

TEST_CASE("bare paths of a star are empty for k >= 2") {
  Rng rng(6);
  const Tree t = gen_tree({TreeFamily::star, 8, 0, 0, 0}, rng);
  CHECK(find_bare_paths(t, 2).empty());
  CHECK(find_bare_paths(t, 3).empty());
}

TEST_CASE("leaves-or-bare-paths dichotomy on random trees") {
  Rng rng(424242);
  for (int rep = 0; rep < 150; ++rep) {
    const int m = 4 + rng.below_int(120);
    const Tree t = random_tree(m, rng);
    for (int k : {2, 3, 5}) {
      const auto pieces = find_bare_paths(t, k);
      check_bare_pieces(t, pieces, k);
      const double need = static_cast<double>(m) / (4.0 * k);
      const bool dichotomy = static_cast<double>(count_leaves(t)) >= need ||
                             static_cast<double>(pieces.size()) >= need;
      CHECK(dichotomy);
    }
  }
}

TEST_CASE("prufer decoding degenerates to a star on constant sequences") {
  const Tree t = tree_from_prufer({3, 3, 3, 3, 3, 3}, 8);
  CHECK(t.degree(3) == 7);
  CHECK(count_leaves(t) == 7);
}

TEST_CASE("generators honor family contracts") {
  Rng rng(11);

  SUBCASE("m=2 is a single edge for every family") {
    for (TreeFamily fam : {TreeFamily::path, TreeFamily::star, TreeFamily::caterpillar,
                           TreeFamily::spider, TreeFamily::random_prufer,
                           TreeFamily::degree_one_or_delta}) {
      const Tree t = gen_tree({fam, 2, 3, 0, 0}, rng);
      CHECK(t.m == 2);
      CHECK(t.edges() == std::vector<std::pair<int, int>>{{0, 1}});
    }
  }

  SUBCASE("degree-one-or-delta histogram") {
    const Tree t = gen_tree({TreeFamily::degree_one_or_delta, 10, 3, 0, 0}, rng);
    for (int v = 0; v < t.m; ++v) {
      const int d = t.degree(v);
      CHECK((d == 1 || d == 3));
    }
  }

  SUBCASE("degree-one-or-delta feasibility") {
    CHECK(degree_one_or_delta_feasible(10, 3));
    CHECK_FALSE(degree_one_or_delta_feasible(9, 3));
    CHECK_FALSE(degree_one_or_delta_feasible(5, 1));
    CHECK(degree_one_or_delta_feasible(2, 1));
    CHECK_THROWS_AS(gen_tree({TreeFamily::degree_one_or_delta, 9, 3, 0, 0}, rng),
                    std::invalid_argument);
  }

  SUBCASE("degree caps are enforced") {
    for (int rep = 0; rep < 30; ++rep) {
      const Tree t = random_tree(40, rng, 4);
      CHECK(t.max_degree() <= 4);
    }
    CHECK_THROWS_AS(gen_tree({TreeFamily::star, 10, 5, 0, 0}, rng), std::invalid_argument);
  }

  SUBCASE("determinism under identical spec and seed") {
    for (TreeFamily fam : {TreeFamily::random_prufer, TreeFamily::degree_one_or_delta,
                           TreeFamily::spider}) {
      const TreeSpec spec{fam, 14, 3, 0, 0};
      Rng a(777), b(777);
      CHECK(gen_tree(spec, a).edges() == gen_tree(spec, b).edges());
    }
  }

  SUBCASE("spider and caterpillar shapes") {
    const Tree spider = gen_tree({TreeFamily::spider, 13, 4, 0, 4}, rng);
    CHECK(spider.degree(0) == 4);
    const Tree cat = gen_tree({TreeFamily::caterpillar, 12, 5, 6, 0}, rng);
    CHECK(cat.max_degree() <= 5);
    CHECK(is_valid_tree(cat));
  }
}

TEST_CASE("edge-list serialization round trip") {
  Rng rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    const Tree t = random_tree(2 + rng.below_int(50), rng);
    std::stringstream ss;
    save_tree(ss, t);
    const Tree back = load_tree(ss);
    CHECK(back.m == t.m);
    CHECK(back.edges() == t.edges());
  }
  std::stringstream bad("tree m=3\n0 1\n");
  CHECK_THROWS_AS(load_tree(bad), std::invalid_argument);
}
