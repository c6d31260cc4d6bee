#pragma once

#include <json.hpp>

#include "treepack/probability.hpp"
#include "treepack/spanning.hpp"
#include "treepack/sprinkle.hpp"
#include "treepack/verify.hpp"

namespace treepack {

// schema "treepack-outcome/1"
nlohmann::json outcome_to_json(const PackingOutcome& outcome);

// extends the engine schema with stage tags and deviation flags
nlohmann::json spanning_outcome_to_json(const SpanningOutcome& outcome);

// one entry per inequality: {name, lhs, rhs, holds}
nlohmann::json report_to_json(const AssumptionReport& report);

nlohmann::json report_to_json(const PackingReport& report);

nlohmann::json report_to_json(const BatteryReport& report);

nlohmann::json overlap_to_json(const OverlapStat& stat);

// flat CSV, one row per test: name, statistic, threshold, pass
std::string battery_to_csv(const BatteryReport& report);

}  // namespace treepack
