#include "lp_tableau.hpp"

#include <algorithm>
#include <cmath>

namespace acnet::milp::detail {

namespace {

constexpr double kDrop = 1e-13;
// A rebuild costs about one pivot per row, so the interval grows with the row count.
constexpr long kRefactorInterval = 100;
constexpr long kRefactorPerRow = 4;

bool finite(double v) { return std::isfinite(v); }

void slack_bounds(RowSense s, double& lo, double& hi) {
  switch (s) {
    case RowSense::le: lo = 0.0; hi = kInf; break;
    case RowSense::ge: lo = -kInf; hi = 0.0; break;
    case RowSense::eq: lo = 0.0; hi = 0.0; break;
  }
}

}  // namespace

Tableau::Tableau(const Model& m, LpTolerances tol) : tol_(tol), nstruct_(m.variable_count()) {
  const auto nrow = static_cast<std::size_t>(m.constraint_count());
  const auto ns = static_cast<std::size_t>(nstruct_);
  const std::size_t ncol = ns + nrow;
  cost_.assign(ncol, 0.0);
  const double sign = m.objective_sense() == ObjSense::maximize ? -1.0 : 1.0;
  for (const auto& t : m.objective()) cost_[static_cast<std::size_t>(t.var)] += sign * t.coef;

  lower_.resize(ncol);
  upper_.resize(ncol);
  for (std::size_t j = 0; j < ns; ++j) {
    lower_[j] = m.variable(static_cast<int>(j)).lower;
    upper_[j] = m.variable(static_cast<int>(j)).upper;
  }
  x_.assign(ncol, 0.0);
  pos_.assign(ncol, Pos::lower);
  where_.assign(ncol, 0);
  nb_.resize(ns);
  d_.resize(ns);
  for (std::size_t j = 0; j < ns; ++j) {
    nb_[j] = static_cast<int>(j);
    where_[j] = static_cast<int>(j);
    d_[j] = cost_[j];
  }
  for (int j = 0; j < nstruct_; ++j) place_nonbasic(j);

  original_ = m.constraints();
  rows_.assign(nrow, std::vector<double>(ns, 0.0));
  basis_.resize(nrow);
  for (std::size_t r = 0; r < nrow; ++r) {
    const auto& row = original_[r];
    double act = 0.0;
    for (const auto& t : row.terms) {
      rows_[r][static_cast<std::size_t>(t.var)] += t.coef;
      act += t.coef * x_[static_cast<std::size_t>(t.var)];
    }
    const std::size_t s = ns + r;
    slack_bounds(row.sense, lower_[s], upper_[s]);
    basis_[r] = static_cast<int>(s);
    where_[s] = static_cast<int>(r);
    pos_[s] = Pos::basic;
    x_[s] = row.rhs - act;
  }

  // Fixed columns that no row or cost touches (aggregated away) take no slot.
  std::vector<char> used(ns, 0);
  for (const auto& row : original_)
    for (const auto& t : row.terms) used[static_cast<std::size_t>(t.var)] = 1;
  for (std::size_t j = 0; j < ns; ++j) {
    if (used[j] || cost_[j] != 0.0 || lower_[j] != upper_[j]) continue;
    pos_[j] = Pos::dead;
    x_[j] = lower_[j];
  }

  std::vector<char> integer(ns, 0);
  for (std::size_t j = 0; j < ns; ++j) integer[j] = m.variable(static_cast<int>(j)).integer ? 1 : 0;
  // Equality rows start with a structural basic instead of a fixed slack, so the
  // slack can be dropped. Continuous columns are preferred.
  for (std::size_t r = 0; r < nrow; ++r) {
    if (original_[r].sense != RowSense::eq) continue;
    const auto& tr = rows_[r];
    double row_max = 0.0;
    for (double v : tr) row_max = std::max(row_max, std::abs(v));
    if (row_max == 0.0) continue;
    int best = -1;
    double best_score = 0.0;
    for (std::size_t k = 0; k < nb_.size(); ++k) {
      const int col = nb_[k];
      if (col >= nstruct_ || lower_[static_cast<std::size_t>(col)] == upper_[static_cast<std::size_t>(col)]) continue;
      const double a = std::abs(tr[k]);
      if (a < 1e-3 * row_max) continue;
      const double score = a / row_max + (integer[static_cast<std::size_t>(col)] ? 0.0 : 2.0);
      if (score > best_score) {
        best_score = score;
        best = static_cast<int>(k);
      }
    }
    if (best < 0) continue;
    const int s = basis_[r];
    shift_nonbasic(best, x_[static_cast<std::size_t>(s)] / tr[static_cast<std::size_t>(best)]);
    pivot(static_cast<int>(r), best);
    pos_[static_cast<std::size_t>(s)] = Pos::dead;
    x_[static_cast<std::size_t>(s)] = 0.0;
  }
  drop_dead_columns();
  recompute_reduced_costs();
  for (int col : nb_) place_nonbasic(col);
  // Re-derive basics after placements.
  refactor();
  iterations_ = 0;
}

void Tableau::place_nonbasic(int col) {
  const auto j = static_cast<std::size_t>(col);
  if (pos_[j] == Pos::dead || pos_[j] == Pos::basic) return;
  const double lo = lower_[j];
  const double hi = upper_[j];
  const double dj = d_[kidx(col)];
  Pos p;
  if (lo == hi) {
    p = Pos::lower;
  } else if (dj > tol_.dual && finite(lo)) {
    p = Pos::lower;
  } else if (dj < -tol_.dual && finite(hi)) {
    p = Pos::upper;
  } else if (pos_[j] == Pos::upper && finite(hi)) {
    p = Pos::upper;
  } else if (finite(lo)) {
    p = Pos::lower;
  } else if (finite(hi)) {
    p = Pos::upper;
  } else {
    p = Pos::zero;
  }
  pos_[j] = p;
  x_[j] = p == Pos::lower ? lo : p == Pos::upper ? hi : 0.0;
}

void Tableau::shift_nonbasic(int k, double delta) {
  if (delta == 0.0) return;
  x_[static_cast<std::size_t>(nb_[static_cast<std::size_t>(k)])] += delta;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const double a = rows_[i][static_cast<std::size_t>(k)];
    if (a != 0.0) x_[static_cast<std::size_t>(basis_[i])] -= a * delta;
  }
}

void Tableau::drop_dead_columns() {
  std::size_t k = 0;
  while (k < nb_.size()) {
    if (pos_[static_cast<std::size_t>(nb_[k])] != Pos::dead) {
      ++k;
      continue;
    }
    const std::size_t last = nb_.size() - 1;
    where_[static_cast<std::size_t>(nb_[k])] = -1;
    if (k != last) {
      nb_[k] = nb_[last];
      d_[k] = d_[last];
      where_[static_cast<std::size_t>(nb_[k])] = static_cast<int>(k);
      for (auto& r : rows_) r[k] = r[last];
    }
    nb_.pop_back();
    d_.pop_back();
    for (auto& r : rows_) r.pop_back();
  }
}

void Tableau::add_row(const LinearConstraint& row) {
  const std::size_t width = nb_.size();
  std::vector<double> fresh(width, 0.0);
  double act = 0.0;
  for (const auto& t : row.terms) {
    const auto j = static_cast<std::size_t>(t.var);
    act += t.coef * x_[j];
    if (pos_[j] == Pos::basic) {
      const auto& tr = rows_[static_cast<std::size_t>(where_[j])];
      for (std::size_t k = 0; k < width; ++k)
        if (tr[k] != 0.0) fresh[k] -= t.coef * tr[k];
    } else {
      fresh[kidx(t.var)] += t.coef;
    }
  }
  for (double& v : fresh)
    if (std::abs(v) < kDrop) v = 0.0;
  const std::size_t s = lower_.size();
  double lo = 0.0;
  double hi = 0.0;
  slack_bounds(row.sense, lo, hi);
  lower_.push_back(lo);
  upper_.push_back(hi);
  cost_.push_back(0.0);
  x_.push_back(row.rhs - act);
  pos_.push_back(Pos::basic);
  where_.push_back(static_cast<int>(rows_.size()));
  rows_.push_back(std::move(fresh));
  basis_.push_back(static_cast<int>(s));
  original_.push_back(row);
}

void Tableau::remove_rows(const std::vector<int>& rows) {
  if (rows.empty()) return;
  const auto ns = static_cast<std::size_t>(nstruct_);
  const std::size_t ncol = lower_.size();
  std::vector<int> remap(ncol);
  std::vector<char> drop_pos(rows_.size(), 0);
  std::vector<char> drop_row(original_.size(), 0);
  for (int r : rows) {
    const std::size_t s = ns + static_cast<std::size_t>(r);
    if (pos_[s] != Pos::basic) throw ModelError("remove_rows: slack is not basic");
    drop_pos[static_cast<std::size_t>(where_[s])] = 1;
    drop_row[static_cast<std::size_t>(r)] = 1;
  }
  int next = 0;
  for (std::size_t j = 0; j < ncol; ++j)
    remap[j] = j >= ns && drop_row[j - ns] ? -1 : next++;
  auto compact = [&](auto& v) {
    std::size_t o = 0;
    for (std::size_t j = 0; j < ncol; ++j)
      if (remap[j] >= 0) v[o++] = v[j];
    v.resize(o);
  };
  compact(cost_);
  compact(lower_);
  compact(upper_);
  compact(x_);
  compact(pos_);
  std::size_t o = 0;
  for (std::size_t r = 0; r < original_.size(); ++r)
    if (!drop_row[r]) {
      if (o != r) original_[o] = std::move(original_[r]);
      ++o;
    }
  original_.resize(o);
  o = 0;
  for (std::size_t p = 0; p < rows_.size(); ++p) {
    if (drop_pos[p]) continue;
    if (o != p) rows_[o] = std::move(rows_[p]);
    basis_[o] = remap[static_cast<std::size_t>(basis_[p])];
    ++o;
  }
  rows_.resize(o);
  basis_.resize(o);
  for (int& c : nb_) c = remap[static_cast<std::size_t>(c)];
  where_.assign(lower_.size(), -1);
  for (std::size_t k = 0; k < nb_.size(); ++k) where_[static_cast<std::size_t>(nb_[k])] = static_cast<int>(k);
  for (std::size_t p = 0; p < basis_.size(); ++p) where_[static_cast<std::size_t>(basis_[p])] = static_cast<int>(p);
}

void Tableau::set_bounds(int col, double lo, double hi) {
  const auto j = static_cast<std::size_t>(col);
  lower_[j] = lo;
  upper_[j] = hi;
  if (pos_[j] == Pos::basic || pos_[j] == Pos::dead) return;
  const double old = x_[j];
  place_nonbasic(col);
  const double delta = x_[j] - old;
  x_[j] = old;
  shift_nonbasic(static_cast<int>(kidx(col)), delta);
}

void Tableau::pivot(int r, int k) {
  const auto rr = static_cast<std::size_t>(r);
  const auto kk = static_cast<std::size_t>(k);
  auto& pr = rows_[rr];
  const double inv = 1.0 / pr[kk];
  nz_.clear();
  for (std::size_t j = 0; j < pr.size(); ++j) {
    if (pr[j] == 0.0) continue;
    pr[j] *= inv;
    if (std::abs(pr[j]) < kDrop) {
      pr[j] = 0.0;
      continue;
    }
    nz_.push_back(static_cast<int>(j));
  }
  pr[kk] = inv;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (i == rr) continue;
    auto& ri = rows_[i];
    const double f = ri[kk];
    if (f == 0.0) continue;
    ri[kk] = 0.0;
    for (int j : nz_) {
      double& v = ri[static_cast<std::size_t>(j)];
      v -= f * pr[static_cast<std::size_t>(j)];
      if (std::abs(v) < kDrop) v = 0.0;
    }
  }
  if (kk < d_.size()) {
    const double f = d_[kk];
    if (f != 0.0) {
      d_[kk] = 0.0;
      for (int j : nz_)
        if (static_cast<std::size_t>(j) < d_.size()) d_[static_cast<std::size_t>(j)] -= f * pr[static_cast<std::size_t>(j)];
    }
  }
  const int q = nb_[kk];
  const int p = basis_[rr];
  nb_[kk] = p;
  basis_[rr] = q;
  where_[static_cast<std::size_t>(q)] = r;
  where_[static_cast<std::size_t>(p)] = k;
  pos_[static_cast<std::size_t>(q)] = Pos::basic;
  ++iterations_;
  ++pivots_since_refactor_;
}

void Tableau::recompute_reduced_costs() {
  d_.assign(nb_.size(), 0.0);
  for (std::size_t k = 0; k < nb_.size(); ++k) d_[k] = cost_[static_cast<std::size_t>(nb_[k])];
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const double cb = cost_[static_cast<std::size_t>(basis_[r])];
    if (cb == 0.0) continue;
    const auto& tr = rows_[r];
    for (std::size_t k = 0; k < tr.size(); ++k)
      if (tr[k] != 0.0) d_[k] -= cb * tr[k];
  }
}

void Tableau::refactor() {
  const long saved_iterations = iterations_;
  const std::size_t m = basis_.size();
  const auto ns = static_cast<std::size_t>(nstruct_);
  const std::size_t ncol = lower_.size();
  std::vector<char> target(ncol, 0);
  for (int b : basis_) target[static_cast<std::size_t>(b)] = 1;

  // Slack basis over structural slots, with the right-hand side as a trailing slot.
  rows_.assign(m, std::vector<double>(ns + 1, 0.0));
  for (std::size_t r = 0; r < m; ++r) {
    for (const auto& t : original_[r].terms) rows_[r][static_cast<std::size_t>(t.var)] += t.coef;
    rows_[r][ns] = original_[r].rhs;
  }
  nb_.resize(ns + 1);
  for (std::size_t j = 0; j < ns; ++j) {
    nb_[j] = static_cast<int>(j);
    where_[j] = static_cast<int>(j);
  }
  nb_[ns] = -1;
  for (std::size_t r = 0; r < m; ++r) {
    basis_[r] = static_cast<int>(ns + r);
    where_[ns + r] = static_cast<int>(r);
  }
  d_.clear();
  std::vector<Pos> old = pos_;
  for (std::size_t j = 0; j < ncol; ++j)
    if (pos_[j] == Pos::basic) pos_[j] = Pos::lower;
  for (std::size_t r = 0; r < m; ++r) pos_[ns + r] = Pos::basic;

  std::vector<int> lost;
  for (std::size_t q = 0; q < ns; ++q) {
    if (!target[q]) continue;
    const auto k = static_cast<std::size_t>(where_[q]);
    std::size_t best = m;
    double best_abs = 1e-9;
    for (std::size_t r = 0; r < m; ++r) {
      const auto b = static_cast<std::size_t>(basis_[r]);
      if (b < ns || target[b]) continue;
      if (std::abs(rows_[r][k]) > best_abs) {
        best_abs = std::abs(rows_[r][k]);
        best = r;
      }
    }
    if (best == m) {
      lost.push_back(static_cast<int>(q));
      continue;
    }
    const int leaving = basis_[best];
    pivot(static_cast<int>(best), static_cast<int>(k));
    const auto lj = static_cast<std::size_t>(leaving);
    pos_[lj] = old[lj] == Pos::basic ? Pos::lower : old[lj];
    if (lower_[lj] == upper_[lj]) pos_[lj] = Pos::dead;
  }

  // Peel off the right-hand side slot.
  std::vector<double> beta(m);
  for (std::size_t r = 0; r < m; ++r) {
    beta[r] = rows_[r][ns];
    rows_[r].pop_back();
  }
  nb_.pop_back();
  d_.assign(nb_.size(), 0.0);
  drop_dead_columns();
  recompute_reduced_costs();

  for (int col : nb_) {
    const auto j = static_cast<std::size_t>(col);
    if (pos_[j] == Pos::lower && !finite(lower_[j])) place_nonbasic(col);
    else if (pos_[j] == Pos::upper && !finite(upper_[j])) place_nonbasic(col);
    else x_[j] = pos_[j] == Pos::lower ? lower_[j] : pos_[j] == Pos::upper ? upper_[j] : 0.0;
  }
  for (int col : lost) place_nonbasic(col);
  for (std::size_t j = 0; j < ncol; ++j)
    if (pos_[j] == Pos::dead) x_[j] = j < ns ? lower_[j] : 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    double v = beta[r];
    const auto& tr = rows_[r];
    for (std::size_t k = 0; k < tr.size(); ++k)
      if (tr[k] != 0.0) v -= tr[k] * x_[static_cast<std::size_t>(nb_[k])];
    x_[static_cast<std::size_t>(basis_[r])] = v;
  }
  iterations_ = saved_iterations;
  pivots_since_refactor_ = 0;
}

void Tableau::maybe_refactor() {
  if (pivots_since_refactor_ >= std::max(kRefactorInterval, kRefactorPerRow * static_cast<long>(basis_.size()))) refactor();
}

double Tableau::objective() const {
  double z = 0.0;
  for (int j = 0; j < nstruct_; ++j) z += cost_[static_cast<std::size_t>(j)] * x_[static_cast<std::size_t>(j)];
  return z;
}

bool Tableau::dual_feasible() const {
  for (std::size_t k = 0; k < nb_.size(); ++k) {
    const auto j = static_cast<std::size_t>(nb_[k]);
    if (lower_[j] == upper_[j]) continue;
    if (pos_[j] == Pos::lower && d_[k] < -tol_.dual) return false;
    if (pos_[j] == Pos::upper && d_[k] > tol_.dual) return false;
    if (pos_[j] == Pos::zero && std::abs(d_[k]) > tol_.dual) return false;
  }
  return true;
}

double Tableau::max_primal_infeasibility() const {
  double worst = 0.0;
  for (int b : basis_) {
    const auto j = static_cast<std::size_t>(b);
    worst = std::max({worst, lower_[j] - x_[j], x_[j] - upper_[j]});
  }
  return worst;
}

LpStatus Tableau::solve(long max_iterations) {
  if (!dual_feasible()) {
    // Flip boxed nonbasics to the side their reduced cost prefers.
    const std::vector<int> cols = nb_;
    for (int col : cols) set_bounds(col, lower_[static_cast<std::size_t>(col)], upper_[static_cast<std::size_t>(col)]);
  }
  if (dual_feasible()) {
    const LpStatus st = dual(max_iterations);
    if (st != LpStatus::optimal || dual_feasible()) return st;
  }
  return primal(max_iterations);
}

LpStatus Tableau::primal(long max_iterations) {
  std::vector<double> dp;
  std::vector<double> c1;
  bool bland = false;
  long degenerate = 0;
  const long start = iterations_;
  int recoveries = 0;
  while (true) {
    if (iterations_ - start >= max_iterations) return LpStatus::iteration_limit;
    maybe_refactor();
    const std::size_t m = rows_.size();
    const std::size_t width = nb_.size();

    c1.assign(m, 0.0);
    bool phase1 = false;
    for (std::size_t r = 0; r < m; ++r) {
      const auto j = static_cast<std::size_t>(basis_[r]);
      if (x_[j] < lower_[j] - tol_.primal) {
        c1[r] = -1.0;
        phase1 = true;
      } else if (x_[j] > upper_[j] + tol_.primal) {
        c1[r] = 1.0;
        phase1 = true;
      }
    }
    const std::vector<double>* dd = &d_;
    if (phase1) {
      dp.assign(width, 0.0);
      for (std::size_t r = 0; r < m; ++r) {
        if (c1[r] == 0.0) continue;
        const auto& tr = rows_[r];
        for (std::size_t k = 0; k < width; ++k)
          if (tr[k] != 0.0) dp[k] -= c1[r] * tr[k];
      }
      dd = &dp;
    }

    int kq = -1;
    double best = 0.0;
    for (std::size_t k = 0; k < width; ++k) {
      const auto j = static_cast<std::size_t>(nb_[k]);
      if (lower_[j] == upper_[j]) continue;
      const double dj = (*dd)[k];
      bool eligible = false;
      if (pos_[j] == Pos::lower) eligible = dj < -tol_.dual;
      else if (pos_[j] == Pos::upper) eligible = dj > tol_.dual;
      else eligible = std::abs(dj) > tol_.dual;
      if (!eligible) continue;
      if (bland) {
        if (kq < 0 || nb_[k] < nb_[static_cast<std::size_t>(kq)]) kq = static_cast<int>(k);
        continue;
      }
      if (std::abs(dj) > best) {
        best = std::abs(dj);
        kq = static_cast<int>(k);
      }
    }
    if (kq < 0) return phase1 ? LpStatus::infeasible : LpStatus::optimal;

    const auto kk = static_cast<std::size_t>(kq);
    const auto qq = static_cast<std::size_t>(nb_[kk]);
    const double dir = (*dd)[kk] < 0 ? 1.0 : -1.0;
    double tmin = kInf;
    if (finite(lower_[qq]) && finite(upper_[qq])) tmin = upper_[qq] - lower_[qq];
    int leave = -1;
    bool leave_to_lower = false;
    double leave_abs = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const double a = rows_[r][kk];
      if (std::abs(a) < tol_.pivot) continue;
      const double rate = -a * dir;
      const auto j = static_cast<std::size_t>(basis_[r]);
      const double xv = x_[j];
      double limit = kInf;
      bool to_lower = false;
      if (phase1 && xv < lower_[j] - tol_.primal) {
        if (rate > 0) {
          limit = (lower_[j] - xv) / rate;
          to_lower = true;
        }
      } else if (phase1 && xv > upper_[j] + tol_.primal) {
        if (rate < 0) limit = (xv - upper_[j]) / -rate;
      } else if (rate > 0 && finite(upper_[j])) {
        limit = (upper_[j] - xv) / rate;
      } else if (rate < 0 && finite(lower_[j])) {
        limit = (xv - lower_[j]) / -rate;
        to_lower = true;
      }
      if (!finite(limit)) continue;
      limit = std::max(limit, 0.0);
      bool take = false;
      if (limit < tmin - 1e-12) {
        take = true;
      } else if (limit <= tmin + 1e-12 && leave >= 0) {
        take = bland ? basis_[r] < basis_[static_cast<std::size_t>(leave)] : std::abs(a) > leave_abs;
      } else if (limit <= tmin + 1e-12 && leave < 0 && !finite(tmin)) {
        take = true;
      }
      if (take) {
        tmin = std::min(limit, tmin);
        leave = static_cast<int>(r);
        leave_to_lower = to_lower;
        leave_abs = std::abs(a);
      }
    }
    if (!finite(tmin)) {
      if (!phase1) return LpStatus::unbounded;
      if (++recoveries > 3) return LpStatus::infeasible;
      refactor();
      continue;
    }

    const double t = tmin;
    shift_nonbasic(kq, dir * t);
    if (leave < 0) {
      pos_[qq] = dir > 0 ? Pos::upper : Pos::lower;
      x_[qq] = dir > 0 ? upper_[qq] : lower_[qq];
      ++iterations_;
    } else {
      const auto j = static_cast<std::size_t>(basis_[static_cast<std::size_t>(leave)]);
      pivot(leave, kq);
      if (lower_[j] == upper_[j]) {
        pos_[j] = j >= static_cast<std::size_t>(nstruct_) ? Pos::dead : Pos::lower;
        x_[j] = lower_[j];
      } else if (leave_to_lower) {
        pos_[j] = Pos::lower;
        x_[j] = lower_[j];
      } else {
        pos_[j] = Pos::upper;
        x_[j] = upper_[j];
      }
      if (pos_[j] == Pos::dead) drop_dead_columns();
    }
    if (t <= 1e-12) {
      if (++degenerate > 3 * static_cast<long>(m + 1)) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
  }
}

LpStatus Tableau::dual(long max_iterations) {
  const long start = iterations_;
  long degenerate = 0;
  bool bland = false;
  while (true) {
    if (iterations_ - start >= max_iterations) return LpStatus::iteration_limit;
    maybe_refactor();
    const std::size_t m = rows_.size();
    const std::size_t width = nb_.size();

    int r = -1;
    double worst = tol_.primal;
    for (std::size_t i = 0; i < m; ++i) {
      const auto j = static_cast<std::size_t>(basis_[i]);
      const double viol = std::max(lower_[j] - x_[j], x_[j] - upper_[j]);
      if (viol <= tol_.primal) continue;
      if (bland) {
        if (r < 0 || basis_[i] < basis_[static_cast<std::size_t>(r)]) r = static_cast<int>(i);
      } else if (viol > worst) {
        worst = viol;
        r = static_cast<int>(i);
      }
    }
    if (r < 0) return LpStatus::optimal;

    const auto& tr = rows_[static_cast<std::size_t>(r)];
    const auto jl = static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)]);
    const bool below = x_[jl] < lower_[jl];
    const double target = below ? lower_[jl] : upper_[jl];

    int kq = -1;
    double best_ratio = kInf;
    double best_abs = 0.0;
    for (std::size_t k = 0; k < width; ++k) {
      const auto j = static_cast<std::size_t>(nb_[k]);
      if (lower_[j] == upper_[j]) continue;
      const double a = tr[k];
      if (std::abs(a) < tol_.pivot) continue;
      const double s = below ? (a < 0 ? 1.0 : -1.0) : (a > 0 ? 1.0 : -1.0);
      if (s > 0 && pos_[j] == Pos::upper) continue;
      if (s < 0 && pos_[j] == Pos::lower) continue;
      const double ratio = std::abs(d_[k]) / std::abs(a);
      bool take = false;
      if (ratio < best_ratio - 1e-12) take = true;
      else if (ratio <= best_ratio + 1e-12) take = bland ? nb_[k] < nb_[static_cast<std::size_t>(kq)] : std::abs(a) > best_abs;
      if (take) {
        best_ratio = std::min(ratio, best_ratio);
        best_abs = std::abs(a);
        kq = static_cast<int>(k);
      }
    }
    if (kq < 0) return LpStatus::infeasible;

    shift_nonbasic(kq, (x_[jl] - target) / tr[static_cast<std::size_t>(kq)]);
    pivot(r, kq);
    if (lower_[jl] == upper_[jl]) pos_[jl] = jl >= static_cast<std::size_t>(nstruct_) ? Pos::dead : Pos::lower;
    else pos_[jl] = below ? Pos::lower : Pos::upper;
    x_[jl] = target;
    if (pos_[jl] == Pos::dead) drop_dead_columns();

    if (best_ratio <= 1e-12) {
      if (++degenerate > 3 * static_cast<long>(m + 1)) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
  }
}

}  // namespace acnet::milp::detail
