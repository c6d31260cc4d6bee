#include "treepack/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "treepack/probability.hpp"
#include "treepack/stats.hpp"

namespace treepack {

PackingReport verify_packing(const std::vector<Tree>& trees,
                             const std::vector<std::vector<int>>& embeddings, int n,
                             const EdgePredicate& edge_ok, const EdgeLabelFn& label_of) {
  PackingReport rep;
  rep.edge_disjoint = true;
  rep.within_host = true;
  if (embeddings.size() != trees.size()) {
    rep.failure = "embedding count differs from tree count";
    rep.pass = false;
    return rep;
  }

  std::set<std::pair<int, int>> all_edges;
  std::vector<int> degree(n, 0);
  for (std::size_t s = 0; s < trees.size(); ++s) {
    const Tree& t = trees[s];
    const std::vector<int>& phi = embeddings[s];
    TreeVerdict v;
    v.injective = static_cast<int>(phi.size()) == t.m;
    std::set<int> targets;
    for (int img : phi) {
      if (img < 0 || img >= n || !targets.insert(img).second) v.injective = false;
    }
    v.adjacency = v.injective;
    if (v.injective) {
      for (auto [a, b] : t.edges()) {
        const int u = std::min(phi[a], phi[b]);
        const int w = std::max(phi[a], phi[b]);
        if (!edge_ok(u, w)) {
          v.adjacency = false;
          rep.within_host = false;
          std::ostringstream os;
          os << "image edge (" << u << "," << w << ") not admissible";
          v.detail = os.str();
        }
        if (!all_edges.insert({u, w}).second) rep.edge_disjoint = false;
        degree[u] += 1;
        degree[w] += 1;
        if (label_of) rep.max_used_label = std::max(rep.max_used_label, label_of(u, w));
      }
    }
    rep.per_tree.push_back(std::move(v));
  }
  rep.max_union_degree = degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());

  rep.pass = rep.edge_disjoint && rep.within_host;
  for (const TreeVerdict& v : rep.per_tree) rep.pass = rep.pass && v.injective && v.adjacency;
  if (!rep.pass && rep.failure.empty()) {
    if (!rep.edge_disjoint) {
      rep.failure = "embeddings share a host edge";
    } else if (!rep.within_host) {
      rep.failure = "an image edge is outside the admissible host";
    } else {
      rep.failure = "an embedding is not injective or not total";
    }
  }
  return rep;
}

PackingReport verify_outcome(const std::vector<Tree>& trees, const PackingOutcome& outcome,
                             double p) {
  std::map<std::pair<int, int>, double> labels;
  for (const UsedEdge& e : outcome.used_edges) labels[{e.u, e.w}] = e.label;
  EdgePredicate ok = [&labels, p](int u, int w) {
    auto it = labels.find({u, w});
    return it != labels.end() && it->second <= p;
  };
  EdgeLabelFn lab = [&labels](int u, int w) {
    auto it = labels.find({u, w});
    return it == labels.end() ? 0.0 : it->second;
  };
  if (!outcome.valid_packing) {
    PackingReport rep;
    rep.failure = "outcome is not a complete packing";
    return rep;
  }
  return verify_packing(trees, outcome.embeddings, outcome.n, ok, lab);
}

double OverlapStat::value(int u, int w) const {
  if (u == w) return 0.0;
  if (u > w) std::swap(u, w);
  return table[static_cast<std::size_t>(w) * (w - 1) / 2 + u];
}

OverlapStat overlap_statistic(const PackingOutcome& outcome, double p, double alpha) {
  OverlapStat st;
  const int n = outcome.n;
  st.n = n;
  st.table.assign(static_cast<std::size_t>(n) * (n - 1) / 2, 0.0);

  std::size_t wmax = 0;
  for (const auto& ws : outcome.w_sets) wmax = std::max(wmax, ws.size());
  st.bound = (2.0 * p / n) * static_cast<double>(wmax);

  for (const auto& ws : outcome.w_sets) {
    const double inc = 1.0 / static_cast<double>(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
      for (std::size_t j = i + 1; j < ws.size(); ++j) {
        const int u = ws[i], w = ws[j];  // w_sets are sorted
        st.table[static_cast<std::size_t>(w) * (w - 1) / 2 + u] += inc;
      }
    }
  }
  for (int w = 1; w < n; ++w) {
    for (int u = 0; u < w; ++u) {
      const double v = st.table[static_cast<std::size_t>(w) * (w - 1) / 2 + u];
      if (v > st.max_value) {
        st.max_value = v;
        st.argmax = {u, w};
      }
    }
  }
  st.max_ratio = st.bound > 0.0 ? st.max_value / st.bound : 0.0;
  st.inequality_holds = st.max_value <= st.bound;
  st.precondition_lhs = 30.0 * std::log(static_cast<double>(n)) / (alpha * alpha * n);
  st.precondition_rhs = p;
  st.precondition_holds = st.precondition_lhs <= p;
  return st;
}

namespace {

struct TauSamples {
  std::vector<double> tau;
  std::vector<long> first_child;  // counts per candidate index
};

// Draws of sample_step on fresh clocks with r candidates at a fixed center.
TauSamples draw_tau(Backend backend, int d, int r, long draws, Rng& rng, int lazy_d_shift) {
  TauSamples out;
  out.tau.reserve(draws);
  out.first_child.assign(r, 0);
  std::vector<int> unused(r);
  for (int i = 0; i < r; ++i) unused[i] = i + 1;  // center is host vertex 0
  const int d_eff = backend == Backend::lazy ? d + lazy_d_shift : d;
  for (long k = 0; k < draws; ++k) {
    ClockStore clocks(r + 1, backend, rng.next());
    StepSample s = sample_step(clocks, 0, unused, d_eff, rng);
    out.tau.push_back(s.tau);
    out.first_child[s.children.front() - 1] += 1;
  }
  return out;
}

BatteryRow pvalue_row(const std::string& name, double p, double level) {
  return {name, p, level, "p_value_min", p > level, false};
}

BatteryRow zscore_row(const std::string& name, double z, double limit) {
  return {name, std::fabs(z), limit, "abs_z_max", std::fabs(z) <= limit, false};
}

BatteryRow skipped_row(const std::string& name) { return {name, 0.0, 0.0, "skipped", true, true}; }

}  // namespace

bool BatteryReport::all_pass() const {
  for (const auto& r : rows) {
    if (!r.pass) return false;
  }
  return true;
}

BatteryReport stat_battery(const BatteryConfig& config) {
  BatteryReport rep;
  Rng rng = Rng::stream(config.seed, 0x5747u);

  const bool tau_powered = config.tau_draws >= config.min_tau_draws;

  // backend equivalence at the configured (d, r)
  {
    const auto [d, r] = config.equivalence_point;
    std::ostringstream base;
    base << "_d" << d << "_r" << r;
    if (!tau_powered) {
      rep.rows.push_back(skipped_row("equiv_tau_ks" + base.str()));
      rep.rows.push_back(skipped_row("equiv_first_child_chi2" + base.str()));
    } else {
      TauSamples eager = draw_tau(Backend::eager, d, r, config.tau_draws, rng, 0);
      TauSamples lazy = draw_tau(Backend::lazy, d, r, config.tau_draws, rng, config.lazy_d_shift);
      rep.rows.push_back(pvalue_row("equiv_tau_ks" + base.str(),
                                    ks_two_sample_pvalue(eager.tau, lazy.tau),
                                    config.reject_level));
      rep.rows.push_back(pvalue_row("equiv_first_child_chi2" + base.str(),
                                    chi2_homogeneity_pvalue(eager.first_child, lazy.first_child),
                                    config.reject_level));
    }
  }

  // order-statistic moments per backend at the configured grid
  for (auto [d, r] : config.moment_points) {
    for (Backend backend : {Backend::eager, Backend::lazy}) {
      const char* tag = backend == Backend::eager ? "eager" : "lazy";
      std::ostringstream base;
      base << "_" << tag << "_d" << d << "_r" << r;
      if (!tau_powered) {
        rep.rows.push_back(skipped_row("tau_mean" + base.str()));
        rep.rows.push_back(skipped_row("tau_second_moment" + base.str()));
        continue;
      }
      TauSamples s = draw_tau(backend, d, r,
                              config.tau_draws, rng,
                              backend == Backend::lazy ? config.lazy_d_shift : 0);
      SampleMoments m1 = sample_moments(s.tau);
      std::vector<double> sq(s.tau.size());
      for (std::size_t i = 0; i < s.tau.size(); ++i) sq[i] = s.tau[i] * s.tau[i];
      SampleMoments m2 = sample_moments(sq);
      const double mu1 = order_stat_moment(d, r, 1);
      const double mu2 = order_stat_moment(d, r, 2);
      rep.rows.push_back(zscore_row("tau_mean" + base.str(),
                                    (m1.mean - mu1) / m1.stderr_mean, config.moment_se_limit));
      rep.rows.push_back(zscore_row("tau_second_moment" + base.str(),
                                    (m2.mean - mu2) / m2.stderr_mean, config.moment_se_limit));
    }
  }

  // first-tree uniformity: ordered image of a single edge on fresh clocks is
  // uniform over the n(n-1) ordered host pairs
  {
    const int n = config.pair_n;
    if (config.pair_runs < config.min_pair_runs) {
      rep.rows.push_back(skipped_row("first_tree_pair_chi2"));
    } else {
      const Tree edge_tree = make_tree(2, {{0, 1}});
      std::vector<long> counts(static_cast<std::size_t>(n) * n, 0);
      for (long k = 0; k < config.pair_runs; ++k) {
        PackingOutcome out = pack({edge_tree}, n, 1.0, Backend::lazy, rng);
        const int a = out.embeddings[0][0], b = out.embeddings[0][1];
        counts[static_cast<std::size_t>(a) * n + b] += 1;
      }
      std::vector<double> observed, expected;
      const double e = static_cast<double>(config.pair_runs) / (n * (n - 1.0));
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          if (a == b) continue;
          observed.push_back(static_cast<double>(counts[static_cast<std::size_t>(a) * n + b]));
          expected.push_back(e);
        }
      }
      const double stat = chi2_statistic(observed, expected);
      const int df = n * (n - 1) - 1;
      rep.rows.push_back(
          pvalue_row("first_tree_pair_chi2", chi2_pvalue(stat, df), config.reject_level));
    }
  }

  std::ostringstream note;
  int active = 0;
  for (const auto& r : rep.rows) {
    if (!r.skipped) ++active;
  }
  note << active << " tests at per-test level " << config.reject_level
       << "; family-wise false-rejection rate is at most " << active * config.reject_level
       << " (Bonferroni)";
  rep.note = note.str();
  return rep;
}

}  // namespace treepack
