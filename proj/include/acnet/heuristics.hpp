#pragma once

#include <iosfwd>
#include <vector>

#include "acnet/formulations.hpp"
#include "acnet/oa_solver.hpp"

namespace acnet {

class HeuristicError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class DegreeMode {
  dclbf,   // degree is k; the center keeps at least n−k edges
  capped,  // degree is d; every node keeps at most d edges
};

struct HeuristicParams {
  DegreeMode mode = DegreeMode::dclbf;
  int degree = 0;
  int h1 = 5;  // center candidates
  int h2 = 5;  // attachment nodes per leaf, besides the center
};

struct CandidateRun {
  NodeId center = 0;
  bool found = false;
  EdgeSelection tree;
  double gamma_h = 0.0;
  OAStatus status = OAStatus::limit;
  double wall_time = 0.0;
};

struct HeuristicResult {
  EdgeSelection tree;
  double gamma_h = 0.0;
  std::vector<CandidateRun> candidates;  // mch only, in center_order
  double wall_time = 0.0;
};

/// Center ranking by the sum of the `slots` heaviest incident weights, and for
/// each of the top h1 centers an attachment ranking of every leaf.
PriorityOrders ranking(const WeightedGraph& g, int slots, int h1);

HeuristicResult mch(const WeightedGraph& g, const HeuristicParams& params, const OAConfig& cfg = {});
HeuristicResult mch_degree_capped(const WeightedGraph& g, const HeuristicParams& params, const OAConfig& cfg = {});

/// Kruskal on descending weight, ties by edge index.
HeuristicResult max_weight_spanning_tree(const WeightedGraph& g);
/// Kruskal on ascending weight, ties by edge index.
HeuristicResult min_weight_spanning_tree(const WeightedGraph& g);
/// Star of maximum λ2 over hubs adjacent to every other node; lowest hub wins ties.
HeuristicResult best_star(const WeightedGraph& g);

double tree_weight(const WeightedGraph& g, const EdgeSelection& x);

/// center,found,gamma_h,status,wall_time
void write_candidates_csv(std::ostream& os, const HeuristicResult& r);

}  // namespace acnet
