#include "treepack/json_io.hpp"

#include <sstream>

namespace treepack {

using nlohmann::json;

json outcome_to_json(const PackingOutcome& o) {
  json j;
  j["schema"] = "treepack-outcome/1";
  j["n"] = o.n;
  j["p"] = o.p;
  j["backend"] = o.backend == Backend::eager ? "eager" : "lazy";
  j["valid_packing"] = o.valid_packing;
  j["success"] = o.success;
  j["max_clock"] = o.max_clock;
  j["max_used_label"] = o.max_used_label;
  j["max_union_degree"] = o.max_union_degree;
  j["terminated_round"] = o.terminated_round;
  if (o.failed_round >= 0) {
    j["failure"] = {{"round", o.failed_round}, {"step", o.failed_step}};
  } else {
    j["failure"] = nullptr;
  }
  j["degree_cap_trace"] = json::array();
  for (auto alive : o.cap_alive) j["degree_cap_trace"].push_back(alive != 0);
  j["trees"] = json::array();
  for (std::size_t s = 0; s < o.embeddings.size(); ++s) {
    json t;
    t["index"] = s;
    t["embedding"] = o.embeddings[s];
    t["w_set_size"] = o.w_sets[s].size();
    t["w_set"] = o.w_sets[s];
    t["designated"] = o.designated[s];
    j["trees"].push_back(std::move(t));
  }
  j["used_edges"] = json::array();
  for (const UsedEdge& e : o.used_edges) {
    j["used_edges"].push_back({{"u", e.u}, {"w", e.w}, {"label", e.label}, {"round", e.round}});
  }
  j["eligible_floor"] = {{"checked", o.floor_checked}, {"violations", o.floor_violations}};
  j["label_invariant_ok"] = o.label_invariant_ok;
  return j;
}

json spanning_outcome_to_json(const SpanningOutcome& o) {
  json j;
  j["schema"] = "treepack-outcome/1";
  j["kind"] = "spanning";
  j["config"] = {{"n", o.config.n},           {"p", o.config.p},
                 {"eps", o.config.eps},       {"delta", o.config.delta},
                 {"alpha", o.config.alpha},   {"alpha_floored", o.config.alpha_floored},
                 {"q", o.config.q},           {"p_prime", o.config.p_prime}};
  j["stage1"] = outcome_to_json(o.stage1);
  j["stage1_ok"] = o.stage1_ok;
  j["aborted_at"] = o.aborted_at;
  j["abort_cause"] = o.abort_cause;
  j["success"] = o.success;
  j["trees"] = json::array();
  for (std::size_t s = 0; s < o.records.size(); ++s) {
    const SpanningTreeRecord& r = o.records[s];
    json t;
    t["index"] = s;
    t["reached"] = r.reached;
    t["embedded"] = r.embedded;
    t["stage_tag"] = embed_route_name(r.route);
    t["q_s"] = r.qs;
    t["q_s_clamped"] = r.qs_clamped;
    t["w_size"] = r.w_size;
    t["deviation"] = r.deviation;
    t["fail_stage"] = r.fail_stage;
    t["embedding"] = o.embeddings[s];
    j["trees"].push_back(std::move(t));
  }
  return j;
}

json report_to_json(const AssumptionReport& report) {
  json j;
  j["conditions"] = json::array();
  for (const Condition& c : report.conditions) {
    j["conditions"].push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
  }
  j["feasible"] = report.feasible;
  j["notes"] = report.notes;
  return j;
}

json report_to_json(const PackingReport& report) {
  json j;
  j["per_tree"] = json::array();
  for (const TreeVerdict& v : report.per_tree) {
    j["per_tree"].push_back(
        {{"injective", v.injective}, {"adjacency", v.adjacency}, {"detail", v.detail}});
  }
  j["edge_disjoint"] = report.edge_disjoint;
  j["within_host"] = report.within_host;
  j["max_used_label"] = report.max_used_label;
  j["max_union_degree"] = report.max_union_degree;
  j["pass"] = report.pass;
  j["failure"] = report.failure;
  return j;
}

json report_to_json(const BatteryReport& report) {
  json j;
  j["tests"] = json::array();
  for (const BatteryRow& r : report.rows) {
    j["tests"].push_back({{"name", r.name},
                          {"statistic", r.statistic},
                          {"threshold", r.threshold},
                          {"threshold_kind", r.threshold_kind},
                          {"pass", r.pass},
                          {"skipped", r.skipped}});
  }
  j["note"] = report.note;
  j["all_pass"] = report.all_pass();
  return j;
}

json overlap_to_json(const OverlapStat& stat) {
  json j;
  j["n"] = stat.n;
  j["bound"] = stat.bound;
  j["max_value"] = stat.max_value;
  j["max_ratio"] = stat.max_ratio;
  j["argmax"] = {stat.argmax.first, stat.argmax.second};
  j["inequality_holds"] = stat.inequality_holds;
  j["precondition"] = {{"lhs", stat.precondition_lhs},
                       {"rhs", stat.precondition_rhs},
                       {"holds", stat.precondition_holds}};
  return j;
}

std::string battery_to_csv(const BatteryReport& report) {
  std::ostringstream os;
  os << "name,statistic,threshold,pass\n";
  for (const BatteryRow& r : report.rows) {
    os << r.name << "," << r.statistic << "," << r.threshold << ","
       << (r.skipped ? "skipped" : (r.pass ? "1" : "0")) << "\n";
  }
  return os.str();
}

}  // namespace treepack
