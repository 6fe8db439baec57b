#pragma once

// Bounded-variable simplex on a condensed (nonbasic-column) tableau, shared by
// solve_lp and the branch-and-cut driver. Internal header.

#include <cstdint>
#include <vector>

#include "acnet/milp.hpp"

namespace acnet::milp::detail {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpTolerances {
  double primal = 1e-9;
  double dual = 1e-9;
  double pivot = 1e-9;
};

/// Columns 0..structural-1 are model variables; column structural+r is the
/// slack of row r, so every row reads a·x + s = b with s bounded by the sense.
/// Row r of the tableau stores x_B[r] + Σ_k T[r][k]·x_{nb[k]} = const.
/// Nonbasic slacks of equality rows can never re-enter and are dropped.
/// Internally the objective is minimized.
class Tableau {
 public:
  Tableau(const Model& m, LpTolerances tol = {});

  int row_count() const { return static_cast<int>(basis_.size()); }
  int column_count() const { return static_cast<int>(lower_.size()); }
  int structural_count() const { return nstruct_; }

  /// Appends a row with a new basic slack. The current basis stays valid.
  void add_row(const LinearConstraint& row);

  /// Deletes rows (indices in insertion order, ascending) whose slack is basic.
  /// The remaining basis stays valid and optimal.
  void remove_rows(const std::vector<int>& rows);
  bool slack_basic(int row) const { return pos_[static_cast<std::size_t>(nstruct_ + row)] == Pos::basic; }
  double slack_value(int row) const { return x_[static_cast<std::size_t>(nstruct_ + row)]; }

  /// Changes bounds of a structural column; nonbasic columns move to the bound
  /// their reduced cost prefers so the basis stays dual feasible when possible.
  void set_bounds(int col, double lo, double hi);
  double lower(int col) const { return lower_[static_cast<std::size_t>(col)]; }
  double upper(int col) const { return upper_[static_cast<std::size_t>(col)]; }

  /// Re-optimizes from the current basis: dual simplex when the basis is dual
  /// feasible, primal two-phase otherwise.
  LpStatus solve(long max_iterations);
  LpStatus primal(long max_iterations);
  LpStatus dual(long max_iterations);

  /// Rebuilds the tableau from the original rows and the current basis.
  void refactor();

  double objective() const;  // minimization form, structural columns only
  const std::vector<double>& values() const { return x_; }
  long iterations() const { return iterations_; }
  bool dual_feasible() const;
  double max_primal_infeasibility() const;

 private:
  enum class Pos : std::uint8_t { basic, lower, upper, zero, dead };

  void pivot(int r, int k);
  /// Moves x_q by delta and updates the basics accordingly.
  void shift_nonbasic(int k, double delta);
  void recompute_reduced_costs();
  void place_nonbasic(int col);
  void drop_dead_columns();
  void maybe_refactor();
  std::size_t kidx(int col) const { return static_cast<std::size_t>(where_[static_cast<std::size_t>(col)]); }

  LpTolerances tol_;
  int nstruct_ = 0;
  std::vector<double> cost_;  // minimization costs, slacks zero
  std::vector<double> lower_, upper_, x_;
  std::vector<Pos> pos_;
  std::vector<int> where_;                 // column -> nonbasic slot, or row for basics
  std::vector<int> basis_;                 // basic column per row
  std::vector<int> nb_;                    // nonbasic column per slot
  std::vector<double> d_;                  // reduced cost per slot
  std::vector<std::vector<double>> rows_;  // T, one vector per row over slots
  std::vector<LinearConstraint> original_;
  long iterations_ = 0;
  long pivots_since_refactor_ = 0;
  std::vector<int> nz_;  // scratch
};

}  // namespace acnet::milp::detail
