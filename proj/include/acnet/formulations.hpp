#pragma once

#include <span>
#include <vector>

#include "acnet/graph.hpp"
#include "acnet/linalg.hpp"
#include "acnet/milp.hpp"

namespace acnet {

class FormulationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A MILP over (x, γ, W[, y]) plus the maps back to those symbols.
/// W holds one variable per pair i ≤ j, edges or not.
struct DesignModel {
  milp::Model model;
  int n = 0;
  std::vector<int> x_map;  // edge index -> variable
  int gamma_index = -1;
  std::vector<int> w_map;  // packed upper triangle, see w_var
  std::vector<int> y_map;  // node-1 -> variable; empty unless degree constrained
  double gamma_cap = 0.0;

  int w_var(NodeId i, NodeId j) const;
  int x_var(int edge) const { return x_map[static_cast<std::size_t>(edge)]; }
  int y_var(NodeId i) const { return y_map.at(static_cast<std::size_t>(i - 1)); }
  bool has_center() const { return !y_map.empty(); }

  EdgeSelection selection(std::span<const double> values) const;
  double gamma(std::span<const double> values) const { return values[static_cast<std::size_t>(gamma_index)]; }
  SymMatrix w_matrix(std::span<const double> values) const;
  /// Full assignment for a given edge set and γ (y left at 0).
  std::vector<double> point(const WeightedGraph& g, const EdgeSelection& x, double gamma) const;
};

struct BaseOptions {
  /// Adds trace(W) ≤ Σ_v Σ_{δ(v)} w − γ̂(n−1) with γ̂ the best star's λ2.
  bool trace_row = false;
};

DesignModel base_relaxed_model(const WeightedGraph& g, int q, double gamma_cap, BaseOptions opts = {});

/// Rows every spanning tree satisfies: Σx = n−1 and Σ_{δ(i)} x ≥ 1 per node.
void add_tree_rows(DesignModel& dm, const WeightedGraph& g);

/// Cutset rows for every component except the largest of an integral x.
std::vector<milp::LinearConstraint> topology_cuts(const DesignModel& dm, const WeightedGraph& g,
                                                  const EdgeSelection& x);
milp::LazyOracle spanning_tree_oracle(const WeightedGraph& g, const DesignModel& dm);

DesignModel dclbf_model(const WeightedGraph& g, int k, double gamma_cap, BaseOptions opts = {});
DesignModel degree_capped_model(const WeightedGraph& g, int d, double gamma_cap, BaseOptions opts = {});

struct PriorityOrders {
  int slots = 0;
  std::vector<NodeId> center_order;
  std::vector<double> center_score;                // S[i-1]
  std::vector<std::vector<NodeId>> neighbor_order;  // [c-1]: neighbors of c by descending weight
  /// [c-1][u-1]: attachment ranking for leaf u of center c; empty when not computed.
  std::vector<std::vector<std::vector<NodeId>>> leaf_edge_order;

  /// Nodes ranked past `slots` in the center's neighbor list.
  std::vector<NodeId> leaves(NodeId center) const;
};

DesignModel restrict_mch(const DesignModel& dm, const WeightedGraph& g, const PriorityOrders& orders,
                         NodeId center, int h1, int h2);

}  // namespace acnet
