#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "acnet/graph.hpp"

namespace acnet {

class LocalizationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Noise data of the relative-measurement estimator.
struct NoiseModel {
  SymMatrix q;                     // process-noise covariance; empty means identity
  std::vector<double> c;           // per-edge measurement weight (parent edge order); empty means C_ij = w_ij
  NodeId reference = 1;
  double c_ref = 1.0;              // absolute-measurement weight at the reference node
};

/// Tree Laplacian with weights C_ij plus c_ref at (r, r). Throws LocalizationError
/// if the selection does not connect every node or c_ref ≤ 0.
SymMatrix dirichlet_laplacian(const WeightedGraph& g, const EdgeSelection& tree, const NoiseModel& noise);

/// SPD solution of Q = P·L·P, via P = Q^½ (Q^½ L Q^½)^-½ Q^½.
SymMatrix steady_state_covariance(const SymMatrix& l, const SymMatrix& q);

/// √(‖L⁻¹‖ / ‖Q⁻¹‖), a lower bound on ‖P‖.
double covariance_lower_bound(const SymMatrix& l, const SymMatrix& q);

/// Frobenius norm of Q − P·L·P.
double riccati_residual(const SymMatrix& p, const SymMatrix& l, const SymMatrix& q);

struct LabeledTree {
  std::string label;
  EdgeSelection tree;
};

struct CovarianceRow {
  std::string label;
  double lambda2 = 0.0;  // of the plain weighted Laplacian of the tree
  double p_norm = 0.0;
  double bound = 0.0;
  double residual = 0.0;
};

struct CovarianceReport {
  std::vector<CovarianceRow> rows;  // ascending p_norm, stable in input order
};

CovarianceReport compare_topologies(const WeightedGraph& g, const std::vector<LabeledTree>& trees,
                                    const NoiseModel& noise);

/// Max-weight Hamiltonian path by greedy insertion, seeded with the heaviest edge.
EdgeSelection greedy_chain(const WeightedGraph& g);

/// Spanning tree from Kruskal over random edge keys drawn from a seeded
/// mt19937_64. The raw engine output is used directly, so the tree for a given
/// seed is the same on every platform.
EdgeSelection random_spanning_tree(const WeightedGraph& g, std::uint64_t seed);

/// optimal, best_star, max_weight, min_weight, chain, random_1..random_k.
std::vector<LabeledTree> standard_candidates(const WeightedGraph& g, const EdgeSelection& optimal,
                                             int random_count, std::uint64_t seed);

/// label,lambda2,p_norm,bound,residual
void write_report_csv(std::ostream& os, const CovarianceReport& r);

}  // namespace acnet
