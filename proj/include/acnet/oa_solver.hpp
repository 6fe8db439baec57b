#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "acnet/formulations.hpp"
#include "acnet/submatrix_scan.hpp"

namespace acnet {

class OAError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class OAMode {
  lazy,   // one branch-and-cut; PSD cuts separated at every integral candidate
  outer,  // re-solve the MILP after each round of cuts
};

struct OAConfig {
  std::vector<int> sizes;  // principal-submatrix sizes; empty means {n}
  double eps_psd = 1e-6;
  double eps_opt = 1e-4;
  bool soc_mode = false;
  OAMode mode = OAMode::lazy;
  int max_iterations = 100000;  // oracle rounds (lazy) or MILP solves (outer)
  double time_limit = 1e300;    // seconds
  long max_cuts_per_round = 0;  // 0: unlimited
  /// Eigen and min-cut separation at fractional LP points.
  bool fractional_cuts = false;
  /// Rayleigh cuts γ ≤ n·w(δ(S))/(|S|(n−|S|)) from two-valued test vectors,
  /// enumerated over vertex subsets at fractional points (n ≤ 16). Exact runs
  /// only, so γ^u_m of a pure bounding run stays the bound of its own sizes. 0 disables.
  int subset_cuts_per_round = 5;
  /// Start γ^u from min(λ2(full), Kelley bound) instead of λ2(full) alone.
  bool kelley_initial_bound = false;
  /// Keep every eigen/SOC row for later audits.
  bool record_cuts = false;
  milp::Limits milp_limits = [] {
    milp::Limits l;
    l.branching = milp::Branching::pseudocost;
    return l;
  }();
};

/// cutoff: milp_limits.cutoff was set and no tree beats it.
enum class OAStatus { optimal, bound, limit, cutoff };
std::string to_string(OAStatus s);

struct TraceRow {
  int iteration = 0;
  double gamma_u = 0.0;
  double lower_bound = 0.0;
  std::map<int, int> cuts_by_size;
  int soc_cuts = 0;
  int topology_cuts = 0;
  double wall_time = 0.0;
};

struct OAResult {
  OAStatus status = OAStatus::limit;
  EdgeSelection tree;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double gap_percent = 0.0;
  long eigen_cut_count = 0;
  long soc_cut_count = 0;
  long topology_cut_count = 0;
  long subset_cut_count = 0;
  long milp_solve_count = 0;
  long node_count = 0;
  double wall_time = 0.0;
  std::vector<double> upper_bound_history;
  std::vector<TraceRow> trace;
  std::vector<milp::LinearConstraint> recorded_cuts;
};

double initial_upper_bound(const WeightedGraph& g);

milp::LinearConstraint eigenvector_cut(const DesignModel& dm, const SubmatrixIndex& j, std::span<const double> v);

/// One tangent cut per ordered pair (i, j), linearized at W*; W*_ii must be ≥ 1e-9.
std::vector<milp::LinearConstraint> soc_oa_cuts(const DesignModel& dm, const SymMatrix& w_star,
                                                const std::vector<std::pair<NodeId, NodeId>>& pairs);

OAResult run_algorithm1(const WeightedGraph& g, const DesignModel& dm, const OAConfig& cfg);
OAResult solve_exact(const WeightedGraph& g, OAConfig cfg = {});

struct KelleyResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};
KelleyResult kelley_relaxation(const WeightedGraph& g, double tol, int max_iterations = 5000);
double kelley_relaxation_bound(const WeightedGraph& g, double tol);

void write_trace_csv(std::ostream& os, const OAResult& r, const std::vector<int>& sizes);

}  // namespace acnet
