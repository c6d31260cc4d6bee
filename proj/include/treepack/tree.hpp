#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treepack/rng.hpp"

namespace treepack {

/// An unrooted tree on vertices 0..m-1, stored as adjacency lists.
/// Invariant (checked by is_valid_tree): connected, acyclic, m-1 edges.
struct Tree {
  int m = 0;
  std::vector<std::vector<int>> adj;
  std::optional<int> root;

  int degree(int v) const { return static_cast<int>(adj[v].size()); }
  int max_degree() const;
  std::vector<std::pair<int, int>> edges() const;  // u < w, sorted
};

Tree make_tree(int m, const std::vector<std::pair<int, int>>& edges);
bool is_valid_tree(const Tree& t);

/// BFS ordering of a rooted tree: order[i] is the vertex with label i.
/// Child visits are in ascending vertex id, so the layout is deterministic.
/// internal is the sorted label set J of non-leaf labels (label 0 always
/// included); child_count[i] and first_child[i] are meaningful for i in J.
struct BfsLayout {
  std::vector<int> order;        // label -> vertex
  std::vector<int> pos;          // vertex -> label
  std::vector<int> parent;       // label -> parent label (-1 for root)
  std::vector<int> child_count;  // label -> number of children
  std::vector<int> first_child;  // label -> smallest child label, -1 if none
  std::vector<int> internal;     // J, ascending

  int size() const { return static_cast<int>(order.size()); }
  // predecessor/successor of label i within J; -1 at the ends
  int pred_in_internal(int i) const;
  int succ_in_internal(int i) const;
};

BfsLayout bfs_order(const Tree& t, int root);

/// Split of a tree into subtrees S (small) and L (large) sharing exactly one
/// vertex, with E(T) = E(S) ∪ E(L) disjointly. Local vertex ids of each part
/// map back to the original tree via *_vertices.
struct TreePartition {
  Tree small, large;
  std::vector<int> small_vertices;  // local id in small -> original id
  std::vector<int> large_vertices;
  int shared = -1;  // original id
  int shared_in_small = -1, shared_in_large = -1;
};

/// For floor(alpha*m) >= 1 the small side satisfies
/// floor(alpha*m)+1 <= |V(S)| <= 2*floor(alpha*m); for floor(alpha*m) = 0,
/// S degenerates to the single shared vertex. Root fixed at vertex 0.
TreePartition partition_tree(const Tree& t, double alpha);

int count_leaves(const Tree& t);

/// Length-k pieces (k edges each, as vertex sequences) cut from the maximal
/// bare segments of t: every inner vertex of a piece has degree exactly 2 in
/// t, pieces are pairwise edge-disjoint, and no inner vertex of a piece
/// occurs in any other piece. Pieces from one segment tile it edge-wise, so
/// consecutive pieces share a junction endpoint.
std::vector<std::vector<int>> find_bare_paths(const Tree& t, int k);

enum class TreeFamily {
  path,
  star,
  caterpillar,
  spider,
  random_prufer,
  degree_one_or_delta,
};

struct TreeSpec {
  TreeFamily family = TreeFamily::random_prufer;
  int m = 0;
  int max_degree = 0;  // degree cap; 0 means m-1 (unconstrained)
  int spine = 0;       // caterpillar: spine vertex count (0 = default)
  int legs = 0;        // spider: leg count (0 = default)
};

/// Throws std::invalid_argument for infeasible specs (never a silent
/// fallback). Identical (spec, rng state) gives an identical tree.
Tree gen_tree(const TreeSpec& spec, Rng& rng);

Tree tree_from_prufer(const std::vector<int>& seq, int m);
bool degree_one_or_delta_feasible(int m, int delta);

// edge-list text format: header "tree m=<m>", then one "u v" pair per line
void save_tree(std::ostream& out, const Tree& t);
Tree load_tree(std::istream& in);

}  // namespace treepack
