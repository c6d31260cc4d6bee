#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "treepack/json_io.hpp"
#include "treepack/verify.hpp"

using namespace treepack;

namespace {

Tree random_tree(int m, int cap, Rng& rng) {
  TreeSpec spec{TreeFamily::random_prufer, m, cap, 0, 0};
  return gen_tree(spec, rng);
}

}  // namespace

TEST_CASE("verifier passes valid engine output") {
  for (Backend backend : {Backend::eager, Backend::lazy}) {
    Rng rng(101);
    std::vector<Tree> trees;
    for (int s = 0; s < 6; ++s) trees.push_back(random_tree(25, 5, rng));
    const PackingOutcome out = pack(trees, 60, 0.8, backend, rng);
    REQUIRE(out.valid_packing);
    const PackingReport rep = verify_outcome(trees, out, 0.8);
    CHECK(rep.pass);
    CHECK(rep.edge_disjoint);
    CHECK(rep.within_host);
    CHECK(rep.max_used_label == doctest::Approx(out.max_used_label).epsilon(1e-15));
    CHECK(rep.max_union_degree == out.max_union_degree);
  }
}

TEST_CASE("verifier rejects a shared host edge") {
  const Tree edge = make_tree(2, {{0, 1}});
  const std::vector<std::vector<int>> embeddings{{0, 1}, {1, 0}};
  const PackingReport rep =
      verify_packing({edge, edge}, embeddings, 4, [](int, int) { return true; });
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.edge_disjoint);
  CHECK(rep.per_tree[0].injective);
  CHECK(rep.per_tree[1].injective);
}

TEST_CASE("verifier rejects a swapped pair that breaks adjacency") {
  // host admits exactly the path image 0-1-2; swapping the last two images
  // claims the absent edge (0, 2)
  const Tree path = make_tree(3, {{0, 1}, {1, 2}});
  HostGraph host = HostGraph::empty(3);
  host.add_edge(0, 1);
  host.add_edge(1, 2);
  const EdgePredicate in_host = [&host](int u, int w) { return host.has_edge(u, w); };

  const PackingReport good = verify_packing({path}, {{0, 1, 2}}, 3, in_host);
  CHECK(good.pass);

  const PackingReport bad = verify_packing({path}, {{0, 2, 1}}, 3, in_host);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.per_tree[0].adjacency);
  CHECK_FALSE(bad.within_host);
  CHECK(bad.per_tree[0].injective);
}

TEST_CASE("verifier rejects non-injective and partial maps") {
  const Tree path = make_tree(3, {{0, 1}, {1, 2}});
  const PackingReport doubled = verify_packing({path}, {{0, 1, 1}}, 4, [](int, int) { return true; });
  CHECK_FALSE(doubled.pass);
  CHECK_FALSE(doubled.per_tree[0].injective);
  const PackingReport missing = verify_packing({path}, {{0, 1, -1}}, 4, [](int, int) { return true; });
  CHECK_FALSE(missing.pass);
}

TEST_CASE("verifier fails incomplete outcomes") {
  Rng rng(102);
  const Tree edge = make_tree(2, {{0, 1}});
  const PackingOutcome out = pack({edge, edge}, 2, 1.0, Backend::lazy, rng);
  REQUIRE_FALSE(out.valid_packing);
  const PackingReport rep = verify_outcome({edge, edge}, out, 1.0);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("overlap statistic on constructed leftover sets") {
  PackingOutcome out;
  out.n = 6;
  out.p = 0.5;
  out.w_sets = {{0, 1, 2}};
  const OverlapStat st = overlap_statistic(out, 0.5, 0.5);
  CHECK(st.value(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(st.value(1, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(st.value(0, 3) == 0.0);
  CHECK(st.bound == doctest::Approx((2.0 * 0.5 / 6.0) * 3.0).epsilon(1e-15));

  // N identical sets of size w give N/w on inside pairs
  PackingOutcome rep;
  rep.n = 6;
  for (int s = 0; s < 5; ++s) rep.w_sets.push_back({1, 3, 4});
  const OverlapStat st5 = overlap_statistic(rep, 0.5, 0.5);
  CHECK(st5.value(1, 3) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK(st5.value(3, 4) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK(st5.max_value == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("overlap statistic is exact and symmetric on engine runs") {
  Rng rng(103);
  std::vector<Tree> trees;
  for (int s = 0; s < 10; ++s) trees.push_back(random_tree(40, 5, rng));
  const PackingOutcome out = pack(trees, 80, 0.5, Backend::lazy, rng);
  REQUIRE(out.valid_packing);
  const OverlapStat st = overlap_statistic(out, 0.5, 0.3);

  // direct per-pair recomputation from the recorded W_s
  for (int u = 0; u < 20; ++u) {
    for (int w = u + 1; w < 25; ++w) {
      double direct = 0.0;
      for (const auto& ws : out.w_sets) {
        const bool in_u = std::binary_search(ws.begin(), ws.end(), u);
        const bool in_w = std::binary_search(ws.begin(), ws.end(), w);
        if (in_u && in_w) direct += 1.0 / static_cast<double>(ws.size());
      }
      CHECK(st.value(u, w) == doctest::Approx(direct).epsilon(1e-12));
      CHECK(st.value(u, w) == st.value(w, u));  // symmetry in (u, w)
      CHECK(std::isfinite(st.value(u, w)));
    }
  }
  // precondition verdict carried alongside: p >= 30 log n / (alpha^2 n)
  CHECK(st.precondition_lhs ==
        doctest::Approx(30.0 * std::log(80.0) / (0.09 * 80.0)).epsilon(1e-12));
  CHECK(st.precondition_holds == (st.precondition_lhs <= 0.5));
}

TEST_CASE("battery passes at powered budgets") {
  BatteryConfig cfg;
  cfg.seed = 2025;
  cfg.tau_draws = 20000;
  cfg.pair_runs = 60000;
  const BatteryReport rep = stat_battery(cfg);
  for (const auto& row : rep.rows) {
    CAPTURE(row.name);
    CHECK(row.pass);
    CHECK_FALSE(row.skipped);
  }
  CHECK(rep.all_pass());
  CHECK(rep.note.find("Bonferroni") != std::string::npos);
}

TEST_CASE("battery skips low-power tests instead of failing") {
  BatteryConfig cfg;
  cfg.seed = 2025;
  cfg.tau_draws = 100;  // below the power floor
  cfg.pair_runs = 100;
  const BatteryReport rep = stat_battery(cfg);
  int skipped = 0;
  for (const auto& row : rep.rows) {
    CHECK(row.pass);  // skipped rows never fail the battery
    skipped += row.skipped ? 1 : 0;
  }
  CHECK(skipped == static_cast<int>(rep.rows.size()));
}

TEST_CASE("battery catches an order-statistic mutation") {
  BatteryConfig cfg;
  cfg.seed = 2025;
  cfg.tau_draws = 20000;
  cfg.pair_runs = 100;  // pair test skipped; the tau tests must do the work
  cfg.lazy_d_shift = 1;
  const BatteryReport rep = stat_battery(cfg);
  CHECK_FALSE(rep.all_pass());
  bool ks_failed = false;
  for (const auto& row : rep.rows) {
    if (row.name.rfind("equiv_tau_ks", 0) == 0) ks_failed = !row.pass;
  }
  CHECK(ks_failed);
}

TEST_CASE("battery report serializes to csv and json") {
  BatteryConfig cfg;
  cfg.seed = 1;
  cfg.tau_draws = 10;  // everything skipped, shape only
  cfg.pair_runs = 10;
  const BatteryReport rep = stat_battery(cfg);
  const std::string csv = battery_to_csv(rep);
  CHECK(csv.rfind("name,statistic,threshold,pass\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(rep.rows.size()) + 1);
  const nlohmann::json j = report_to_json(rep);
  CHECK(j["tests"].size() == rep.rows.size());
  CHECK(j.contains("all_pass"));
}

TEST_CASE("outcome json schema") {
  Rng rng(104);
  const Tree edge = make_tree(2, {{0, 1}});
  const PackingOutcome out = pack({edge}, 4, 1.0, Backend::lazy, rng);
  const nlohmann::json j = outcome_to_json(out);
  CHECK(j["schema"] == "treepack-outcome/1");
  CHECK(j["trees"].size() == 1);
  CHECK(j["used_edges"].size() == 1);
  CHECK(j["label_invariant_ok"] == true);

  const SpanningOutcome sp;
  const nlohmann::json js = spanning_outcome_to_json(sp);
  CHECK(js["schema"] == "treepack-outcome/1");
  CHECK(js["kind"] == "spanning");
}
