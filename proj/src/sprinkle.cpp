#include "treepack/sprinkle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace treepack {

StepSample sample_step(ClockStore& clocks, int u, const std::vector<int>& unused, int d,
                       Rng& rng) {
  if (d < 1) throw std::invalid_argument("sample_step: need d >= 1");
  StepSample out;

  std::vector<int> eligible;
  eligible.reserve(unused.size());
  for (int w : unused) {
    if (!clocks.rung(u, w)) eligible.push_back(w);
  }
  out.eligible = static_cast<int>(eligible.size());
  if (out.eligible < d) return out;  // step failure, reported to the caller

  if (clocks.backend() == Backend::eager) {
    std::vector<std::pair<double, int>> entries;
    entries.reserve(eligible.size());
    for (int w : eligible) entries.emplace_back(clocks.entry_time(u, w), w);
    std::sort(entries.begin(), entries.end());  // ties fall to the smaller id
    out.tau = entries[d - 1].first;
    for (int j = 0; j < d; ++j) {
      const int w = entries[j].second;
      const double lab = clocks.label(u, w);
      out.children.push_back(w);
      out.labels.push_back(lab);
      clocks.ring(u, w, lab);
    }
  } else {
    const int r = out.eligible;
    // ascending inverse transform through the first d order statistics of
    // r uniforms: given the j-th value a, the rest are uniform on (a, 1]
    std::vector<double> entry(d);
    double prev = 0.0;
    for (int j = 0; j < d; ++j) {
      const double step = 1.0 - std::pow(1.0 - rng.u01(), 1.0 / static_cast<double>(r - j));
      prev = prev + (1.0 - prev) * step;
      entry[j] = prev;
    }
    out.tau = entry[d - 1];
    // uniform random ordered d-subset by partial Fisher-Yates
    for (int j = 0; j < d; ++j) {
      const int idx = j + rng.below_int(r - j);
      std::swap(eligible[j], eligible[idx]);
      const int w = eligible[j];
      const double c = clocks.clock(u, w);
      const double lab = c + (1.0 - c) * entry[j];
      out.children.push_back(w);
      out.labels.push_back(lab);
      clocks.ring(u, w, lab);
    }
  }

  // step update for everything that kept running (rung edges are no-ops)
  for (int w : unused) clocks.advance(u, w, out.tau);
  out.ok = true;
  return out;
}

RoundOutcome run_round(ClockStore& clocks, const Tree& tree, int root, int designated, Rng& rng,
                       const EligibleFloorContext* ctx) {
  const int n = clocks.size();
  const int m = tree.m;
  if (m > n) throw std::invalid_argument("run_round: tree larger than host");

  if (designated < 0 || designated >= m) {
    throw std::invalid_argument("run_round: designated vertex out of range");
  }

  RoundOutcome out;
  const BfsLayout lay = bfs_order(tree, root);

  out.embedding.assign(m, -1);
  std::vector<int> image(m, -1);  // BFS label -> host vertex
  image[0] = rng.below_int(n);
  out.embedding[root] = image[0];

  std::vector<char> host_used(n, 0);
  host_used[image[0]] = 1;
  std::vector<int> unused;
  unused.reserve(n - 1);
  for (int v = 0; v < n; ++v) {
    if (!host_used[v]) unused.push_back(v);
  }

  bool failed = false;
  for (int i : lay.internal) {
    const int d = lay.child_count[i];
    if (d == 0) continue;  // single-vertex tree: the root step is a no-op
    const int u = image[i];
    const int ch = lay.first_child[i];
    if (static_cast<int>(unused.size()) != n - ch) {
      throw std::logic_error("run_round: |U_i| != n - ch(i)");
    }

    StepSample step = sample_step(clocks, u, unused, d, rng);
    if (ctx != nullptr && ctx->prev_alive) {
      ++out.floor_checked;
      if (static_cast<double>(step.eligible) < static_cast<double>(n - ch) - ctx->cap) {
        ++out.floor_violations;
      }
    }
    if (!step.ok) {
      out.fail_step = i;
      failed = true;
      break;
    }
    for (int j = 0; j < d; ++j) {
      const int w = step.children[j];
      image[ch + j] = w;
      out.embedding[lay.order[ch + j]] = w;
      host_used[w] = 1;
      out.used.push_back({std::min(u, w), std::max(u, w), step.labels[j], -1});
    }
    // drop the newly used hosts from the unused pool
    unused.erase(std::remove_if(unused.begin(), unused.end(),
                                [&](int v) { return host_used[v] != 0; }),
                 unused.end());
  }

  if (failed) return out;
  out.ok = true;
  for (int v = 0; v < n; ++v) {
    if (!host_used[v]) out.w_set.push_back(v);
  }
  out.w_set.push_back(out.embedding[designated]);
  std::sort(out.w_set.begin(), out.w_set.end());
  return out;
}

PackingOutcome pack(const std::vector<Tree>& trees, int n, double p, Backend backend, Rng& rng,
                    const PackOptions& opts) {
  if (n < 1) throw std::invalid_argument("pack: need n >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("pack: need 0 < p <= 1");
  for (const Tree& t : trees) {
    if (t.m > n) throw std::invalid_argument("pack: tree larger than host");
  }

  PackingOutcome out;
  out.n = n;
  out.p = p;
  out.backend = backend;

  ClockStore clocks(n, backend, rng.next());
  const double cap = opts.cap_factor * n * p;
  std::vector<int> degree(n, 0);
  bool alive = true;

  for (std::size_t s = 0; s < trees.size(); ++s) {
    const Tree& tree = trees[s];
    const int root = s < opts.roots.size() ? opts.roots[s] : tree.root.value_or(0);
    const int designated = s < opts.designated.size() ? opts.designated[s] : root;

    EligibleFloorContext ctx{alive, cap};
    RoundOutcome round = run_round(clocks, tree, root, designated, rng, &ctx);
    out.floor_checked += round.floor_checked;
    out.floor_violations += round.floor_violations;
    if (!round.ok) {
      out.failed_round = static_cast<int>(s);
      out.failed_step = round.fail_step;
      for (UsedEdge& e : round.used) {  // partial round still consumed edges
        e.round = static_cast<int>(s);
        degree[e.u] += 1;
        degree[e.w] += 1;
        out.used_edges.push_back(e);
      }
      break;
    }

    for (UsedEdge& e : round.used) {
      e.round = static_cast<int>(s);
      degree[e.u] += 1;
      degree[e.w] += 1;
      out.used_edges.push_back(e);
    }
    out.embeddings.push_back(std::move(round.embedding));
    out.w_sets.push_back(std::move(round.w_set));
    out.designated.push_back(designated);

    alive = check_degree_cap(degree, cap);
    out.cap_alive.push_back(alive ? 1 : 0);
    if (!alive) {
      out.terminated_round = static_cast<int>(s);
      break;
    }
  }

  out.max_clock = clocks.max_clock();
  out.max_union_degree = degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
  for (const UsedEdge& e : out.used_edges) out.max_used_label = std::max(out.max_used_label, e.label);

  // used-edge label invariant: every used edge has c = t and is used exactly
  // once, and no used label exceeds the running clock maximum
  out.label_invariant_ok = true;
  std::set<std::pair<int, int>> seen;
  for (const UsedEdge& e : out.used_edges) {
    if (!seen.insert({e.u, e.w}).second) out.label_invariant_ok = false;
    if (!clocks.rung(e.u, e.w) || clocks.clock(e.u, e.w) != e.label) out.label_invariant_ok = false;
  }
  if (out.max_used_label > out.max_clock) out.label_invariant_ok = false;

  out.valid_packing =
      out.failed_round < 0 && out.terminated_round < 0 && out.embeddings.size() == trees.size();
  out.success = out.valid_packing && out.max_used_label <= p;
  return out;
}

std::vector<int> union_degrees(const std::vector<Tree>& trees,
                               const std::vector<std::vector<int>>& embeddings, int n) {
  std::vector<int> degree(n, 0);
  for (std::size_t s = 0; s < embeddings.size(); ++s) {
    for (auto [a, b] : trees[s].edges()) {
      degree[embeddings[s][a]] += 1;
      degree[embeddings[s][b]] += 1;
    }
  }
  return degree;
}

bool check_degree_cap(const std::vector<int>& degrees, double cap) {
  for (int d : degrees) {
    if (static_cast<double>(d) > cap) return false;
  }
  return true;
}

}  // namespace treepack
