// treepack: randomized tree-packing simulator front end.
//
// Subcommands: pack (Monte Carlo packing sweeps), threshold (degree-cap
// failure rates over an omega grid of adversarial degree-{1,D} trees),
// validate (parameter feasibility report), selftest (distributional test
// battery). All runs are deterministic under (flags, seed): trial k uses the
// derived stream splitmix64(seed ^ golden*(k+1)).

#include <CLI11.hpp>
#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "treepack/json_io.hpp"
#include "treepack/probability.hpp"
#include "treepack/spanning.hpp"
#include "treepack/sprinkle.hpp"
#include "treepack/verify.hpp"

using namespace treepack;

namespace {

struct TreeRequest {
  bool none = false;
  bool from_file = false;
  std::string path;
  TreeSpec spec;
};

TreeRequest parse_tree_request(const std::string& text) {
  TreeRequest req;
  if (text == "none") {
    req.none = true;
    return req;
  }
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw CLI::ValidationError("--trees", "empty tree spec");

  if (parts[0] == "file") {
    if (parts.size() != 2) throw CLI::ValidationError("--trees", "file:<path> expected");
    req.from_file = true;
    req.path = parts[1];
    return req;
  }

  static const std::map<std::string, TreeFamily> families{
      {"path", TreeFamily::path},
      {"star", TreeFamily::star},
      {"caterpillar", TreeFamily::caterpillar},
      {"spider", TreeFamily::spider},
      {"random", TreeFamily::random_prufer},
      {"d1d", TreeFamily::degree_one_or_delta},
  };
  auto fam = families.find(parts[0]);
  if (fam == families.end()) {
    throw CLI::ValidationError("--trees", "unknown family '" + parts[0] + "'");
  }
  req.spec.family = fam->second;
  if (parts.size() < 2) throw CLI::ValidationError("--trees", "family:size expected");
  req.spec.m = std::stoi(parts[1]);
  for (std::size_t i = 2; i < parts.size(); ++i) {
    const std::string& p = parts[i];
    if (p.rfind("deg", 0) == 0) {
      req.spec.max_degree = std::stoi(p.substr(3));
    } else if (p.rfind("spine", 0) == 0) {
      req.spec.spine = std::stoi(p.substr(5));
    } else if (p.rfind("legs", 0) == 0) {
      req.spec.legs = std::stoi(p.substr(4));
    } else {
      throw CLI::ValidationError("--trees", "unknown parameter '" + p + "'");
    }
  }
  return req;
}

std::vector<Tree> build_trees(const TreeRequest& req, int count, Rng& rng) {
  std::vector<Tree> trees;
  if (req.none) return trees;
  if (req.from_file) {
    std::ifstream in(req.path);
    if (!in) throw std::runtime_error("cannot open tree fixture " + req.path);
    const Tree t = load_tree(in);
    for (int i = 0; i < count; ++i) trees.push_back(t);
    return trees;
  }
  for (int i = 0; i < count; ++i) trees.push_back(gen_tree(req.spec, rng));
  return trees;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, bool strict) {
  if (flag) return *flag;
  if (const char* env = std::getenv("TREEPACK_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  if (strict) {
    throw CLI::ValidationError("--seed", "required in --strict mode (or set TREEPACK_SEED)");
  }
  return 0;
}

void write_output(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + out_path);
  out << payload;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void run_trials(int trials, int jobs, const std::function<void(int)>& work) {
  if (jobs <= 1) {
    for (int t = 0; t < trials; ++t) work(t);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(jobs, trials);
  pool.reserve(workers);
  for (int i = 0; i < workers; ++i) {
    pool.emplace_back([&]() {
      for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) work(t);
    });
  }
  for (auto& th : pool) th.join();
}

struct PackRow {
  std::uint64_t seed = 0;
  bool valid = false;
  double max_label = 0.0;
  int max_degree = 0;
  int failure_round = -1;
  nlohmann::json outcome_json;
};

int cmd_pack(int n, double p, const std::string& trees_text, int count, int trials,
             std::uint64_t master, const std::string& backend_name, int jobs,
             const std::string& out_path, const std::string& format, bool strict,
             bool emit_outcomes) {
  const TreeRequest req = parse_tree_request(trees_text);
  const Backend backend = backend_name == "eager" ? Backend::eager : Backend::lazy;

  std::vector<PackRow> rows(trials);
  run_trials(trials, jobs, [&](int t) {
    Rng rng = Rng::stream(master, static_cast<std::uint64_t>(t));
    const std::uint64_t trial_seed = splitmix64(master ^ (0x9e3779b97f4a7c15ULL * (t + 1)));
    const std::vector<Tree> trees = build_trees(req, count, rng);
    const PackingOutcome outcome = pack(trees, n, p, backend, rng);
    const PackingReport report = trees.empty()
                                     ? PackingReport{.per_tree = {},
                                                     .edge_disjoint = true,
                                                     .within_host = true,
                                                     .max_used_label = 0.0,
                                                     .max_union_degree = 0,
                                                     .pass = true,
                                                     .failure = ""}
                                     : verify_outcome(trees, outcome, p);
    PackRow& row = rows[t];
    row.seed = trial_seed;
    row.valid = report.pass;
    row.max_label = outcome.max_used_label;
    row.max_degree = outcome.max_union_degree;
    row.failure_round = outcome.failed_round >= 0 ? outcome.failed_round : outcome.terminated_round;
    if (emit_outcomes) row.outcome_json = outcome_to_json(outcome);
  });

  bool all_valid = true;
  if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (int t = 0; t < trials; ++t) {
      nlohmann::json row{{"trial", t},
                         {"seed", rows[t].seed},
                         {"valid", rows[t].valid},
                         {"max_label", rows[t].max_label},
                         {"max_degree", rows[t].max_degree},
                         {"failure_round", rows[t].failure_round}};
      if (emit_outcomes) row["outcome"] = rows[t].outcome_json;
      arr.push_back(std::move(row));
      all_valid = all_valid && rows[t].valid;
    }
    write_output(out_path, arr.dump(2) + "\n");
  } else {
    std::ostringstream csv;
    csv << "seed,valid,max_label,max_degree,failure_round\n";
    for (const PackRow& row : rows) {
      csv << row.seed << "," << (row.valid ? 1 : 0) << "," << fmt_double(row.max_label) << ","
          << row.max_degree << "," << row.failure_round << "\n";
      all_valid = all_valid && row.valid;
    }
    write_output(out_path, csv.str());
  }
  return (strict && !all_valid) ? 1 : 0;
}

int cmd_threshold(int n, double p, const std::vector<double>& omegas, int trials,
                  std::uint64_t master, int jobs, const std::string& out_path) {
  const int tree_count = static_cast<int>(n * p / 4.0);
  std::ostringstream csv;
  csv << "omega,delta,trees,trials,cap_exceeded,rate,verify_failures\n";
  for (std::size_t oi = 0; oi < omegas.size(); ++oi) {
    const double omega = omegas[oi];
    const int delta = static_cast<int>(std::ceil(n * p / omega));
    const int lo = (n + 1) / 2, hi = 3 * n / 4;
    // feasible sizes satisfy m == 2 (mod delta-1); delta=1 never reaches the
    // requested window (only the single edge exists)
    std::vector<int> sizes;
    if (delta >= 2) {
      for (int m = lo; m <= hi; ++m) {
        if (degree_one_or_delta_feasible(m, delta)) sizes.push_back(m);
      }
    }
    if (sizes.empty()) {
      std::cerr << "threshold: skipping omega=" << omega << " (no feasible size in [" << lo << ","
                << hi << "] for delta=" << delta << ")\n";
      continue;
    }

    std::vector<int> exceeded(trials, 0), bad(trials, 0);
    run_trials(trials, jobs, [&](int t) {
      Rng rng = Rng::stream(master, oi * static_cast<std::uint64_t>(trials) + t);
      std::vector<Tree> trees;
      for (int s = 0; s < tree_count; ++s) {
        const int m = sizes[rng.below_int(static_cast<int>(sizes.size()))];
        trees.push_back(gen_tree({TreeFamily::degree_one_or_delta, m, delta, 0, 0}, rng));
      }
      const PackingOutcome outcome = pack(trees, n, p, Backend::lazy, rng);
      exceeded[t] = outcome.terminated_round >= 0 ? 1 : 0;
      if (outcome.valid_packing) {
        bad[t] = verify_outcome(trees, outcome, 1.0).pass ? 0 : 1;  // structural check only
      }
    });
    long total = 0, verify_failures = 0;
    for (int e : exceeded) total += e;
    for (int b : bad) verify_failures += b;
    csv << fmt_double(omega) << "," << delta << "," << tree_count << "," << trials << "," << total
        << "," << fmt_double(static_cast<double>(total) / trials) << "," << verify_failures
        << "\n";
  }
  write_output(out_path, csv.str());
  return 0;
}

int cmd_validate(int n, double p, double eps, double alpha, int delta, long count,
                 const std::string& out_path) {
  Params prm;
  prm.n = n;
  prm.p = p;
  prm.eps = eps;
  prm.alpha = alpha;
  prm.delta = delta;
  prm.count = count;
  const AssumptionReport rep = validate_params(prm);
  nlohmann::json j = report_to_json(rep);
  j["derived"] = {{"clock_drift", prm.clock_drift()},
                  {"tau_max", prm.tau_max()},
                  {"degree_cap", prm.degree_cap()}};
  write_output(out_path, j.dump(2) + "\n");
  return 0;  // feasibility is a report, not an error
}

int cmd_selftest(std::uint64_t master, long tau_draws, long pair_runs, int d_shift,
                 const std::string& out_path, const std::string& format) {
  BatteryConfig cfg;
  cfg.seed = master;
  cfg.tau_draws = tau_draws;
  cfg.pair_runs = pair_runs;
  cfg.lazy_d_shift = d_shift;
  const BatteryReport rep = stat_battery(cfg);
  if (format == "json") {
    write_output(out_path, report_to_json(rep).dump(2) + "\n");
  } else {
    write_output(out_path, battery_to_csv(rep));
  }
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"treepack: randomized tree packing into G(n,p) by online sprinkling"};
  app.require_subcommand(1);
  app.fallthrough();  // --seed/--strict may appear after the subcommand

  std::optional<std::uint64_t> seed_flag;
  bool strict = false;
  app.add_option("--seed", seed_flag, "master seed (fallback: TREEPACK_SEED, then 0)");
  app.add_flag("--strict", strict, "require an explicit seed; exit 1 on verification failure");

  // pack
  auto* pack_cmd = app.add_subcommand("pack", "run Monte Carlo packings and verify each outcome");
  int n = 200, count = 1, trials = 1, jobs = 1;
  double p = 0.3;
  std::string trees_text = "random:100:deg5";
  std::string backend = "lazy", out_path, format = "csv";
  bool emit_outcomes = false;
  pack_cmd->add_option("--n", n, "host vertex count");
  pack_cmd->add_option("--p", p, "edge probability");
  pack_cmd->add_option("--trees", trees_text,
                       "family:size[:params] | file:<path> | none "
                       "(families: path star caterpillar spider random d1d; "
                       "params: degD spineK legsK)");
  pack_cmd->add_option("--count", count, "trees per trial");
  pack_cmd->add_option("--trials", trials, "number of independent trials");
  pack_cmd->add_option("--backend", backend, "eager|lazy")
      ->check(CLI::IsMember({"eager", "lazy"}));
  pack_cmd->add_option("--jobs", jobs, "parallel trial workers");
  pack_cmd->add_option("--out", out_path, "output path (default stdout)");
  pack_cmd->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  pack_cmd->add_flag("--outcomes", emit_outcomes, "embed full outcome JSON per trial (json only)");

  // threshold
  auto* thr_cmd = app.add_subcommand(
      "threshold", "degree-cap failure rate of adversarial degree-{1,D} trees over an omega grid");
  int tn = 256, ttrials = 200, tjobs = 1;
  double tp = 0.25;
  std::vector<double> omegas{2, 4, 8, 16, 32};
  std::string tout;
  thr_cmd->add_option("--n", tn, "host vertex count");
  thr_cmd->add_option("--p", tp, "edge probability");
  thr_cmd->add_option("--omega", omegas, "omega grid (delta = ceil(np/omega))")->delimiter(',');
  thr_cmd->add_option("--trials", ttrials, "trials per grid point");
  thr_cmd->add_option("--jobs", tjobs, "parallel trial workers");
  thr_cmd->add_option("--out", tout, "output path (default stdout)");

  // validate
  auto* val_cmd = app.add_subcommand("validate", "evaluate the feasibility inequalities");
  int vn = 200, vdelta = 5;
  double vp = 0.3, veps = 0.5, valpha = 0.5;
  long vcount = 15;
  std::string vout;
  val_cmd->add_option("--n", vn, "host vertex count")->required();
  val_cmd->add_option("--p", vp, "edge probability")->required();
  val_cmd->add_option("--eps", veps, "epsilon");
  val_cmd->add_option("--alpha", valpha, "alpha");
  val_cmd->add_option("--delta", vdelta, "max tree degree");
  val_cmd->add_option("--count", vcount, "number of trees N");
  val_cmd->add_option("--out", vout, "output path (default stdout)");

  // selftest
  auto* self_cmd = app.add_subcommand("selftest", "run the statistical battery with pinned seeds");
  long tau_draws = 100000, pair_runs = 1000000;
  int d_shift = 0;
  std::string sout, sformat = "csv";
  self_cmd->add_option("--tau-draws", tau_draws, "draws per order-statistic test");
  self_cmd->add_option("--pair-runs", pair_runs, "runs for the ordered-pair uniformity test");
  self_cmd->add_option("--mutate-d-shift", d_shift,
                       "test hook: shift d in the lazy order-statistic draw");
  self_cmd->add_option("--out", sout, "output path (default stdout)");
  self_cmd->add_option("--format", sformat, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // config error
  }

  try {
    const std::uint64_t master = resolve_seed(seed_flag, strict);
    if (pack_cmd->parsed()) {
      return cmd_pack(n, p, trees_text, count, trials, master, backend, jobs, out_path, format,
                      strict, emit_outcomes);
    }
    if (thr_cmd->parsed()) {
      return cmd_threshold(tn, tp, omegas, ttrials, master, tjobs, tout);
    }
    if (val_cmd->parsed()) {
      return cmd_validate(vn, vp, veps, valpha, vdelta, vcount, vout);
    }
    if (self_cmd->parsed()) {
      return cmd_selftest(master, tau_draws, pair_runs, d_shift, sout, sformat);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
