#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "acnet/heuristics.hpp"
#include "acnet/localization.hpp"
#include "acnet/oa_solver.hpp"

namespace acnet {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Selected edges as [[i, j], ...] in edge order.
nlohmann::json tree_json(const WeightedGraph& g, const EdgeSelection& x);

nlohmann::json to_json(const WeightedGraph& g, const OAResult& r);
nlohmann::json to_json(const WeightedGraph& g, const HeuristicResult& r);
nlohmann::json to_json(const CovarianceReport& r);

/// Versioned envelope: schema_version, tool_version, command, instance_digest,
/// n, edges, parameters, result, wall_time.
nlohmann::json make_report(const std::vector<std::string>& command, const WeightedGraph& g,
                           nlohmann::json parameters, nlohmann::json result, double wall_time);

/// Copy with every "wall_time" key removed, at any depth.
nlohmann::json strip_timing(const nlohmann::json& j);

/// Throws std::runtime_error naming the first non-finite number's JSON pointer.
void require_finite(const nlohmann::json& j);

}  // namespace acnet
