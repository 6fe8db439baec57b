#include "acnet/formulations.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace acnet {

using milp::LinearConstraint;
using milp::RowSense;
using milp::Term;

int DesignModel::w_var(NodeId i, NodeId j) const {
  if (i > j) std::swap(i, j);
  if (i < 1 || j > n) throw FormulationError("W index out of range");
  // row i (1-based) starts after the (i-1) previous rows of lengths n, n-1, ...
  const int a = i - 1;
  const int offset = a * n - a * (a - 1) / 2;
  return w_map[static_cast<std::size_t>(offset + (j - i))];
}

EdgeSelection DesignModel::selection(std::span<const double> values) const {
  EdgeSelection x(x_map.size());
  for (std::size_t e = 0; e < x_map.size(); ++e) x.set(e, values[static_cast<std::size_t>(x_map[e])] > 0.5);
  return x;
}

SymMatrix DesignModel::w_matrix(std::span<const double> values) const {
  SymMatrix w(static_cast<std::size_t>(n));
  for (NodeId i = 1; i <= n; ++i)
    for (NodeId j = i; j <= n; ++j) {
      const double v = values[static_cast<std::size_t>(w_var(i, j))];
      w(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = v;
      w(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(i - 1)) = v;
    }
  return w;
}

std::vector<double> DesignModel::point(const WeightedGraph& g, const EdgeSelection& x, double gamma) const {
  check_conforms(g, x);
  std::vector<double> p(static_cast<std::size_t>(model.variable_count()), 0.0);
  for (std::size_t e = 0; e < x_map.size(); ++e) p[static_cast<std::size_t>(x_map[e])] = x[e] ? 1.0 : 0.0;
  p[static_cast<std::size_t>(gamma_index)] = gamma;
  const SymMatrix lap = weighted_laplacian(g, x);
  const double inv_n = 1.0 / n;
  for (NodeId i = 1; i <= n; ++i)
    for (NodeId j = i; j <= n; ++j) {
      const double shift = i == j ? gamma * (1.0 - inv_n) : -gamma * inv_n;
      p[static_cast<std::size_t>(w_var(i, j))] = lap(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) - shift;
    }
  return p;
}

namespace {

double best_star_lambda2(const WeightedGraph& g) {
  double best = 0.0;
  const int n = g.node_count();
  for (NodeId h = 1; h <= n; ++h) {
    EdgeSelection x(g.edge_count());
    bool ok = true;
    for (NodeId j = 1; j <= n && ok; ++j) {
      if (j == h) continue;
      const int e = g.edge_index(h, j);
      if (e < 0) ok = false;
      else x.set(static_cast<std::size_t>(e));
    }
    if (ok) best = std::max(best, algebraic_connectivity(weighted_laplacian(g, x)).lambda2);
  }
  return best;
}

}  // namespace

DesignModel base_relaxed_model(const WeightedGraph& g, int q, double gamma_cap, BaseOptions opts) {
  if (!(gamma_cap > 0.0) || !std::isfinite(gamma_cap)) throw FormulationError("gamma_cap must be finite and positive");
  const int n = g.node_count();
  if (q < 0) throw FormulationError("edge budget must be non-negative");
  DesignModel dm;
  dm.n = n;
  dm.gamma_cap = gamma_cap;
  auto& m = dm.model;

  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    dm.x_map.push_back(m.add_binary("x_" + std::to_string(ed.i) + "_" + std::to_string(ed.j)));
  }
  dm.gamma_index = m.add_variable(0.0, gamma_cap, false, "gamma");

  std::vector<double> incident(static_cast<std::size_t>(n), 0.0);
  for (const auto& ed : g.edges()) {
    incident[static_cast<std::size_t>(ed.i - 1)] += ed.w;
    incident[static_cast<std::size_t>(ed.j - 1)] += ed.w;
  }
  const double inv_n = 1.0 / n;
  for (NodeId i = 1; i <= n; ++i)
    for (NodeId j = i; j <= n; ++j) {
      const std::string name = "W_" + std::to_string(i) + "_" + std::to_string(j);
      if (i == j) {
        dm.w_map.push_back(m.add_variable(-gamma_cap * (n - 1) * inv_n, incident[static_cast<std::size_t>(i - 1)], false, name));
      } else {
        const int e = g.edge_index(i, j);
        const double w = e >= 0 ? g.edge(static_cast<std::size_t>(e)).w : 0.0;
        dm.w_map.push_back(m.add_variable(-w, gamma_cap * inv_n, false, name));
      }
    }

  // W_ii - Σ_j w_ij x_ij + γ(n-1)/n = 0 and W_ij + w_ij x_ij - γ/n = 0
  for (NodeId i = 1; i <= n; ++i)
    for (NodeId j = i; j <= n; ++j) {
      LinearConstraint row;
      row.sense = RowSense::eq;
      row.rhs = 0.0;
      row.tag = "lift";
      row.terms.push_back({dm.w_var(i, j), 1.0});
      if (i == j) {
        for (NodeId k = 1; k <= n; ++k) {
          const int e = k == i ? -1 : g.edge_index(i, k);
          if (e >= 0) row.terms.push_back({dm.x_var(e), -g.edge(static_cast<std::size_t>(e)).w});
        }
        row.terms.push_back({dm.gamma_index, (n - 1) * inv_n});
      } else {
        const int e = g.edge_index(i, j);
        if (e >= 0) row.terms.push_back({dm.x_var(e), g.edge(static_cast<std::size_t>(e)).w});
        row.terms.push_back({dm.gamma_index, -inv_n});
      }
      m.add_constraint(std::move(row));
    }

  LinearConstraint budget{{}, RowSense::le, static_cast<double>(q), "budget"};
  for (int v : dm.x_map) budget.terms.push_back({v, 1.0});
  m.add_constraint(std::move(budget));

  if (opts.trace_row) {
    // Σ_i W_ii ≤ Σ_v Σ_{δ(v)} w − γ̂(n−1)
    double total = 0.0;
    for (double s : incident) total += s;
    LinearConstraint tr{{}, RowSense::le, total - best_star_lambda2(g) * (n - 1), "trace"};
    for (NodeId i = 1; i <= n; ++i) tr.terms.push_back({dm.w_var(i, i), 1.0});
    m.add_constraint(std::move(tr));
  }

  std::vector<Term> obj{{dm.gamma_index, 1.0}};
  m.set_objective(obj, milp::ObjSense::maximize);
  return dm;
}

void add_tree_rows(DesignModel& dm, const WeightedGraph& g) {
  const int n = g.node_count();
  LinearConstraint total{{}, RowSense::eq, static_cast<double>(n - 1), "tree"};
  for (int v : dm.x_map) total.terms.push_back({v, 1.0});
  dm.model.add_constraint(std::move(total));
  for (NodeId i = 1; i <= n; ++i) {
    LinearConstraint deg{{}, RowSense::ge, 1.0, "topology"};
    for (NodeId j = 1; j <= n; ++j) {
      const int e = j == i ? -1 : g.edge_index(i, j);
      if (e >= 0) deg.terms.push_back({dm.x_var(e), 1.0});
    }
    dm.model.add_constraint(std::move(deg));
  }
}

std::vector<LinearConstraint> topology_cuts(const DesignModel& dm, const WeightedGraph& g, const EdgeSelection& x) {
  auto comps = connected_components(g, x);
  std::vector<LinearConstraint> cuts;
  if (comps.size() <= 1) return cuts;
  std::size_t largest = 0;
  for (std::size_t c = 1; c < comps.size(); ++c)
    if (comps[c].size() > comps[largest].size()) largest = c;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    if (c == largest) continue;
    const NodeCut cut = make_cut(g, comps[c]);
    LinearConstraint row{{}, RowSense::ge, 1.0, "topology"};
    for (int e : cut.cut_edges) row.terms.push_back({dm.x_var(e), 1.0});
    cuts.push_back(std::move(row));
  }
  return cuts;
}

milp::LazyOracle spanning_tree_oracle(const WeightedGraph& g, const DesignModel& dm) {
  milp::LazyOracle o;
  o.integral = [&g, &dm](const milp::Candidate& c) {
    milp::SeparationResult r;
    r.cuts = topology_cuts(dm, g, dm.selection(c.values));
    return r;
  };
  return o;
}

namespace {

void add_center_variables(DesignModel& dm) {
  LinearConstraint one{{}, RowSense::eq, 1.0, "center"};
  for (NodeId i = 1; i <= dm.n; ++i) {
    dm.y_map.push_back(dm.model.add_binary("y_" + std::to_string(i)));
    one.terms.push_back({dm.y_map.back(), 1.0});
  }
  dm.model.add_constraint(std::move(one));
}

std::vector<Term> incident_terms(const DesignModel& dm, const WeightedGraph& g, NodeId i) {
  std::vector<Term> t;
  for (NodeId j = 1; j <= g.node_count(); ++j) {
    const int e = j == i ? -1 : g.edge_index(i, j);
    if (e >= 0) t.push_back({dm.x_var(e), 1.0});
  }
  return t;
}

}  // namespace

DesignModel dclbf_model(const WeightedGraph& g, int k, double gamma_cap, BaseOptions opts) {
  const int n = g.node_count();
  if (k < 1 || k > n - 1) throw FormulationError("dclbf: k must lie in [1, n-1], got " + std::to_string(k));
  DesignModel dm = base_relaxed_model(g, n - 1, gamma_cap, opts);
  add_center_variables(dm);
  // Σ_{j≠i} x_ij − (n−k−1) y_i ≥ 1
  for (NodeId i = 1; i <= n; ++i) {
    LinearConstraint row{incident_terms(dm, g, i), RowSense::ge, 1.0, "center-degree"};
    if (n - k - 1 != 0) row.terms.push_back({dm.y_var(i), -static_cast<double>(n - k - 1)});
    dm.model.add_constraint(std::move(row));
  }
  return dm;
}

DesignModel degree_capped_model(const WeightedGraph& g, int d, double gamma_cap, BaseOptions opts) {
  const int n = g.node_count();
  if (d < 2 && n >= 3) throw FormulationError("degree cap below 2 admits no spanning tree");
  if (d < 1 || d > n - 1) throw FormulationError("degree cap must lie in [2, n-1], got " + std::to_string(d));
  DesignModel dm = base_relaxed_model(g, n - 1, gamma_cap, opts);
  add_center_variables(dm);
  for (NodeId i = 1; i <= n; ++i)
    dm.model.add_constraint({incident_terms(dm, g, i), RowSense::le, static_cast<double>(d), "degree-cap"});
  return dm;
}

std::vector<NodeId> PriorityOrders::leaves(NodeId center) const {
  const auto& nb = neighbor_order.at(static_cast<std::size_t>(center - 1));
  if (static_cast<std::size_t>(slots) >= nb.size()) return {};
  return {nb.begin() + slots, nb.end()};
}

DesignModel restrict_mch(const DesignModel& dm, const WeightedGraph& g, const PriorityOrders& orders, NodeId center,
                         int h1, int h2) {
  const int n = g.node_count();
  if (!dm.has_center()) throw FormulationError("restrict_mch needs a model with center variables");
  if (h1 < 1 || h1 > n) throw FormulationError("h1 out of range");
  if (h2 < 0) throw FormulationError("h2 must be non-negative");
  const auto top_end = orders.center_order.begin() + std::min<std::ptrdiff_t>(h1, static_cast<std::ptrdiff_t>(orders.center_order.size()));
  if (std::find(orders.center_order.begin(), top_end, center) == top_end)
    throw FormulationError("node " + std::to_string(center) + " is not among the top-h1 center candidates");
  const auto& per_leaf = orders.leaf_edge_order.at(static_cast<std::size_t>(center - 1));
  if (per_leaf.empty()) throw FormulationError("no leaf rankings computed for center " + std::to_string(center));

  DesignModel out = dm;
  for (NodeId i = 1; i <= n; ++i) {
    const double v = i == center ? 1.0 : 0.0;
    out.model.set_bounds(out.y_var(i), v, v);
  }
  for (NodeId u : orders.leaves(center)) {
    const auto& rank = per_leaf.at(static_cast<std::size_t>(u - 1));
    std::vector<char> allowed(static_cast<std::size_t>(n + 1), 0);
    allowed[static_cast<std::size_t>(center)] = 1;
    for (std::size_t r = 0; r < rank.size() && r < static_cast<std::size_t>(h2); ++r) allowed[static_cast<std::size_t>(rank[r])] = 1;
    for (NodeId l = 1; l <= n; ++l) {
      if (l == u || allowed[static_cast<std::size_t>(l)]) continue;
      const int e = g.edge_index(u, l);
      if (e >= 0) out.model.set_bounds(out.x_var(e), 0.0, 0.0);
    }
  }
  return out;
}

}  // namespace acnet
