#include "acnet/report.hpp"

#include <cmath>
#include <stdexcept>

#include "acnet/instance.hpp"

namespace acnet {

using nlohmann::json;

json tree_json(const WeightedGraph& g, const EdgeSelection& x) {
  json out = json::array();
  for (std::size_t e = 0; e < x.size(); ++e)
    if (x[e]) out.push_back({g.edge(e).i, g.edge(e).j});
  return out;
}

json to_json(const WeightedGraph& g, const OAResult& r) {
  json trace = json::array();
  for (const auto& t : r.trace) {
    json by_size = json::object();
    for (const auto& [m, c] : t.cuts_by_size) by_size[std::to_string(m)] = c;
    trace.push_back({{"iteration", t.iteration},
                     {"gamma_u", t.gamma_u},
                     {"lower_bound", t.lower_bound},
                     {"cuts_by_size", by_size},
                     {"soc_cuts", t.soc_cuts},
                     {"topology_cuts", t.topology_cuts},
                     {"wall_time", t.wall_time}});
  }
  return {{"status", to_string(r.status)},
          {"tree", r.tree.size() ? tree_json(g, r.tree) : json::array()},
          {"lower_bound", r.lower_bound},
          {"upper_bound", r.upper_bound},
          {"gap_percent", r.gap_percent},
          {"eigen_cuts", r.eigen_cut_count},
          {"soc_cuts", r.soc_cut_count},
          {"topology_cuts", r.topology_cut_count},
          {"subset_cuts", r.subset_cut_count},
          {"milp_solves", r.milp_solve_count},
          {"nodes", r.node_count},
          {"upper_bound_history", r.upper_bound_history},
          {"trace", trace},
          {"wall_time", r.wall_time}};
}

json to_json(const WeightedGraph& g, const HeuristicResult& r) {
  json cands = json::array();
  for (const auto& c : r.candidates)
    cands.push_back({{"center", c.center},
                     {"found", c.found},
                     {"gamma_h", c.gamma_h},
                     {"status", to_string(c.status)},
                     {"tree", c.found ? tree_json(g, c.tree) : json::array()},
                     {"wall_time", c.wall_time}});
  return {{"tree", r.tree.size() ? tree_json(g, r.tree) : json::array()},
          {"gamma_h", r.gamma_h},
          {"candidates", cands},
          {"wall_time", r.wall_time}};
}

json to_json(const CovarianceReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"label", row.label},
                    {"lambda2", row.lambda2},
                    {"p_norm", row.p_norm},
                    {"bound", row.bound},
                    {"residual", row.residual}});
  return {{"rows", rows}};
}

json make_report(const std::vector<std::string>& command, const WeightedGraph& g, json parameters, json result,
                 double wall_time) {
  return {{"schema_version", kReportSchemaVersion},
          {"tool_version", kToolVersion},
          {"command", command},
          {"instance_digest", digest_hex(instance_digest(g))},
          {"n", g.node_count()},
          {"edges", g.edge_count()},
          {"parameters", std::move(parameters)},
          {"result", std::move(result)},
          {"wall_time", wall_time}};
}

json strip_timing(const json& j) {
  if (j.is_object()) {
    json out = json::object();
    for (auto it = j.begin(); it != j.end(); ++it)
      if (it.key() != "wall_time") out[it.key()] = strip_timing(it.value());
    return out;
  }
  if (j.is_array()) {
    json out = json::array();
    for (const auto& v : j) out.push_back(strip_timing(v));
    return out;
  }
  return j;
}

namespace {

void check(const json& j, const std::string& path) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) throw std::runtime_error("non-finite number at " + path);
  if (j.is_object())
    for (auto it = j.begin(); it != j.end(); ++it) check(it.value(), path + "/" + it.key());
  if (j.is_array())
    for (std::size_t k = 0; k < j.size(); ++k) check(j[k], path + "/" + std::to_string(k));
}

}  // namespace

void require_finite(const json& j) { check(j, ""); }

}  // namespace acnet
