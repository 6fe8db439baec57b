#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace acnet::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class RowSense { le, eq, ge };
enum class ObjSense { minimize, maximize };

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct LinearConstraint {
  std::vector<Term> terms;
  RowSense sense = RowSense::le;
  double rhs = 0.0;
  /// Free-form label carried into dumps and cut statistics ("topology", "eigen:3", ...).
  std::string tag;

  double activity(std::span<const double> values) const;
  /// Signed slack: >= 0 when satisfied (for eq rows, -|residual|).
  double slack(std::span<const double> values) const;
};

struct Variable {
  double lower = 0.0;
  double upper = kInf;
  bool integer = false;
  std::string name;
};

class Model {
 public:
  int add_variable(double lower, double upper, bool integer, std::string name = {});
  int add_binary(std::string name = {}) { return add_variable(0.0, 1.0, true, std::move(name)); }
  int add_constraint(LinearConstraint row);
  void set_objective(std::vector<Term> terms, ObjSense sense);
  void set_bounds(int var, double lower, double upper);
  void set_integer(int var, bool integer) { vars_.at(static_cast<std::size_t>(var)).integer = integer; }

  int variable_count() const { return static_cast<int>(vars_.size()); }
  int constraint_count() const { return static_cast<int>(rows_.size()); }
  const std::vector<Variable>& variables() const { return vars_; }
  const Variable& variable(int v) const { return vars_.at(static_cast<std::size_t>(v)); }
  const std::vector<LinearConstraint>& constraints() const { return rows_; }
  const std::vector<Term>& objective() const { return objective_; }
  ObjSense objective_sense() const { return sense_; }

  double objective_value(std::span<const double> values) const;
  /// Largest bound/row violation of a point (0 when feasible).
  double max_violation(std::span<const double> values) const;
  /// Throws ModelError if a term references a missing variable or bounds cross.
  void validate() const;

 private:
  std::vector<Variable> vars_;
  std::vector<LinearConstraint> rows_;
  std::vector<Term> objective_;
  ObjSense sense_ = ObjSense::minimize;
};

enum class Status { optimal, infeasible, unbounded, limit };
std::string to_string(Status s);

struct MilpSolution {
  Status status = Status::infeasible;
  bool has_incumbent = false;
  std::vector<double> values;
  double objective = 0.0;
  /// Proof bound in the model's objective sense (max: an upper bound).
  double dual_bound = 0.0;
  long node_count = 0;
  long cut_count = 0;       // lazily added rows
  long user_cut_count = 0;  // rows from fractional separation
  long lp_iterations = 0;
  double wall_time = 0.0;
  /// Dual bound after each processed node, in the model's objective sense.
  std::vector<double> bound_history;
  /// Every row appended during the solve, in insertion order.
  std::vector<LinearConstraint> added_rows;
};

/// What a separation callback sees.
struct Candidate {
  std::span<const double> values;
  double dual_bound = 0.0;  // current global proof bound (model sense)
  std::optional<double> incumbent;
  long node_count = 0;
};

struct SeparationResult {
  std::vector<LinearConstraint> cuts;
  /// Optional feasible point the engine may adopt as incumbent after checking it.
  std::optional<std::vector<double>> heuristic;
};

/// Lazy-constraint contract. `integral` is invoked on every integer-feasible
/// LP point before it can become incumbent; returned cuts must be violated by
/// the candidate and valid for every feasible point of the true problem.
/// `fractional`, when set, may return valid cuts for fractional LP points.
struct LazyOracle {
  std::function<SeparationResult(const Candidate&)> integral;
  std::function<SeparationResult(const Candidate&)> fractional;
};

enum class Branching {
  most_fractional,  // ties by lowest variable index
  pseudocost,       // product score of average per-unit bound changes; most fractional until learned
};

struct Limits {
  long max_nodes = 1'000'000;
  double time_limit = std::numeric_limits<double>::infinity();  // seconds
  double rel_gap = 1e-9;
  double abs_gap = 1e-9;
  int root_cut_rounds = 60;
  int node_cut_rounds = 4;
  double feasibility_tol = 1e-6;
  double integrality_tol = 1e-6;
  Branching branching = Branching::most_fractional;
  /// Prune every node that cannot beat this objective value (model sense). Pruned
  /// bounds still enter dual_bound, so it stays a valid bound for the whole model.
  std::optional<double> cutoff;
};

MilpSolution solve_lp(const Model& m);
MilpSolution solve_milp(const Model& m, const LazyOracle& oracle = {}, const Limits& limits = {},
                        const std::vector<double>* start = nullptr);

/// Pluggable engine contract; BuiltinSolver forwards to solve_milp.
class MilpSolver {
 public:
  virtual ~MilpSolver() = default;
  virtual MilpSolution solve(const Model& m, const LazyOracle& oracle, const Limits& limits,
                             const std::vector<double>* start) = 0;
  virtual std::string name() const = 0;
};

class BuiltinSolver final : public MilpSolver {
 public:
  MilpSolution solve(const Model& m, const LazyOracle& oracle, const Limits& limits,
                     const std::vector<double>* start) override {
    return solve_milp(m, oracle, limits, start);
  }
  std::string name() const override { return "builtin-branch-and-cut"; }
};

std::shared_ptr<MilpSolver> default_solver();

/// LP-style text dump (debugging aid, see docs/lp_format.md).
std::string to_lp_format(const Model& m);

}  // namespace acnet::milp
