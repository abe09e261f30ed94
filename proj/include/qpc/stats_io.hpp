#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qpc/harness.hpp"

namespace qpc {

inline constexpr int kStatsSchemaVersion = 1;

// Shortest decimal that parses back to the same double.
std::string format_double(double value);

nlohmann::json stats_to_json(const TrialStats& stats);
TrialStats stats_from_json(const nlohmann::json& doc);

// Header: name,estimate,ci_low,ci_high,target,trials. An absent target is an
// empty cell.
std::string metrics_to_csv(const std::vector<Metric>& metrics);
// Successes are recovered as round(estimate * trials).
std::vector<Metric> metrics_from_csv(std::string_view text);

nlohmann::json metric_to_json(const Metric& m);
Metric metric_from_json(const nlohmann::json& doc);

}  // namespace qpc
