#include "acnet/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <queue>
#include <sstream>
#include <unordered_set>

#include "lp_tableau.hpp"

namespace acnet::milp {

double LinearConstraint::activity(std::span<const double> values) const {
  double s = 0.0;
  for (const auto& t : terms) s += t.coef * values[static_cast<std::size_t>(t.var)];
  return s;
}

double LinearConstraint::slack(std::span<const double> values) const {
  const double a = activity(values);
  switch (sense) {
    case RowSense::le: return rhs - a;
    case RowSense::ge: return a - rhs;
    case RowSense::eq: return -std::abs(a - rhs);
  }
  return 0.0;
}

int Model::add_variable(double lower, double upper, bool integer, std::string name) {
  if (lower > upper) throw ModelError("variable bounds cross: [" + std::to_string(lower) + ", " + std::to_string(upper) + "]");
  vars_.push_back({lower, upper, integer, std::move(name)});
  return static_cast<int>(vars_.size()) - 1;
}

int Model::add_constraint(LinearConstraint row) {
  for (const auto& t : row.terms)
    if (t.var < 0 || t.var >= variable_count())
      throw ModelError("constraint references unknown variable " + std::to_string(t.var));
  rows_.push_back(std::move(row));
  return static_cast<int>(rows_.size()) - 1;
}

void Model::set_objective(std::vector<Term> terms, ObjSense sense) {
  for (const auto& t : terms)
    if (t.var < 0 || t.var >= variable_count())
      throw ModelError("objective references unknown variable " + std::to_string(t.var));
  objective_ = std::move(terms);
  sense_ = sense;
}

void Model::set_bounds(int var, double lower, double upper) {
  if (lower > upper) throw ModelError("variable bounds cross");
  auto& v = vars_.at(static_cast<std::size_t>(var));
  v.lower = lower;
  v.upper = upper;
}

double Model::objective_value(std::span<const double> values) const {
  double z = 0.0;
  for (const auto& t : objective_) z += t.coef * values[static_cast<std::size_t>(t.var)];
  return z;
}

double Model::max_violation(std::span<const double> values) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j)
    worst = std::max({worst, vars_[j].lower - values[j], values[j] - vars_[j].upper});
  for (const auto& r : rows_) worst = std::max(worst, -r.slack(values));
  return worst;
}

void Model::validate() const {
  for (const auto& v : vars_)
    if (v.lower > v.upper) throw ModelError("variable '" + v.name + "' has crossing bounds");
  for (const auto& r : rows_)
    for (const auto& t : r.terms)
      if (t.var < 0 || t.var >= variable_count()) throw ModelError("row references unknown variable");
  for (const auto& t : objective_)
    if (t.var < 0 || t.var >= variable_count()) throw ModelError("objective references unknown variable");
}

std::string to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::limit: return "limit";
  }
  return "unknown";
}

std::shared_ptr<MilpSolver> default_solver() { return std::make_shared<BuiltinSolver>(); }

namespace {

using detail::LpStatus;
using detail::Tableau;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr long kLpIterationCap = 200000;
constexpr int kCutMaxAge = 3;

/// Hash of a row after scaling by its largest coefficient and rounding to 1e-9.
std::uint64_t row_hash(const LinearConstraint& row) {
  double scale = std::abs(row.rhs);
  for (const auto& t : row.terms) scale = std::max(scale, std::abs(t.coef));
  if (scale == 0.0) scale = 1.0;
  std::vector<std::pair<int, std::int64_t>> coefs;
  for (const auto& t : row.terms) {
    const auto q = static_cast<std::int64_t>(std::llround(t.coef / scale * 1e9));
    if (q != 0) coefs.emplace_back(t.var, q);
  }
  std::sort(coefs.begin(), coefs.end());
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  for (auto [v, q] : coefs) {
    mix(static_cast<std::uint64_t>(v));
    mix(static_cast<std::uint64_t>(q));
  }
  mix(static_cast<std::uint64_t>(row.sense));
  mix(static_cast<std::uint64_t>(std::llround(row.rhs / scale * 1e9)));
  return h;
}

/// Substitutes out continuous columns that are defined by a single equality row
/// and appear in no other row. Bounds that the definition does not imply become
/// explicit rows. Cuts and points are translated on the way in and out.
class Aggregation {
 public:
  explicit Aggregation(const Model& m) : def_of_(static_cast<std::size_t>(m.variable_count()), -1) {
    const auto nv = static_cast<std::size_t>(m.variable_count());
    std::vector<int> occurrences(nv, 0);
    for (const auto& r : m.constraints())
      for (const auto& t : r.terms) ++occurrences[static_cast<std::size_t>(t.var)];

    std::vector<char> defining(m.constraints().size(), 0);
    for (std::size_t r = 0; r < m.constraints().size(); ++r) {
      const auto& row = m.constraints()[r];
      if (row.sense != RowSense::eq) continue;
      double row_max = 0.0;
      for (const auto& t : row.terms) row_max = std::max(row_max, std::abs(t.coef));
      int pick = -1;
      for (std::size_t k = 0; k < row.terms.size(); ++k) {
        const auto j = static_cast<std::size_t>(row.terms[k].var);
        if (m.variable(static_cast<int>(j)).integer || occurrences[j] != 1 || def_of_[j] >= 0) continue;
        if (std::abs(row.terms[k].coef) < 1e-6 * row_max) continue;
        pick = static_cast<int>(k);
        break;
      }
      if (pick < 0) continue;
      const Term piv = row.terms[static_cast<std::size_t>(pick)];
      Def d{piv.var, row.rhs / piv.coef, {}};
      for (const auto& t : row.terms)
        if (t.var != piv.var) d.terms.push_back({t.var, -t.coef / piv.coef});
      def_of_[static_cast<std::size_t>(piv.var)] = static_cast<int>(defs_.size());
      defs_.push_back(std::move(d));
      defining[r] = 1;
    }

    for (std::size_t j = 0; j < nv; ++j) {
      const auto& v = m.variable(static_cast<int>(j));
      if (def_of_[j] >= 0) reduced_.add_variable(0.0, 0.0, false, v.name);
      else reduced_.add_variable(v.lower, v.upper, v.integer, v.name);
    }
    LinearConstraint obj{m.objective(), RowSense::eq, 0.0, {}};
    const LinearConstraint mapped_obj = map(obj);
    offset_ = -mapped_obj.rhs;
    reduced_.set_objective(mapped_obj.terms, m.objective_sense());
    for (std::size_t r = 0; r < m.constraints().size(); ++r)
      if (!defining[r]) reduced_.add_constraint(map(m.constraints()[r]));
    for (const auto& d : defs_) add_bound_rows(m, d);
  }

  bool empty() const { return defs_.empty(); }
  bool eliminated(int var) const { return def_of_[static_cast<std::size_t>(var)] >= 0; }
  const Model& reduced() const { return reduced_; }
  /// Objective constant dropped by the substitution, in the model's own sense.
  double objective_offset() const { return offset_; }

  LinearConstraint map(const LinearConstraint& row) const {
    if (defs_.empty()) return row;
    LinearConstraint out{{}, row.sense, row.rhs, row.tag};
    scratch_.clear();
    for (const auto& t : row.terms) {
      const int d = def_of_[static_cast<std::size_t>(t.var)];
      if (d < 0) {
        scratch_.push_back(t);
        continue;
      }
      const Def& def = defs_[static_cast<std::size_t>(d)];
      out.rhs -= t.coef * def.c0;
      for (const auto& u : def.terms) scratch_.push_back({u.var, t.coef * u.coef});
    }
    std::sort(scratch_.begin(), scratch_.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    double big = 0.0;
    for (const auto& t : scratch_) big = std::max(big, std::abs(t.coef));
    for (std::size_t k = 0; k < scratch_.size();) {
      Term acc = scratch_[k++];
      while (k < scratch_.size() && scratch_[k].var == acc.var) acc.coef += scratch_[k++].coef;
      if (std::abs(acc.coef) > 1e-13 * big) out.terms.push_back(acc);
    }
    return out;
  }

  void expand(std::vector<double>& x) const {
    for (const auto& d : defs_) {
      double v = d.c0;
      for (const auto& t : d.terms) v += t.coef * x[static_cast<std::size_t>(t.var)];
      x[static_cast<std::size_t>(d.var)] = v;
    }
  }

 private:
  struct Def {
    int var;
    double c0;
    std::vector<Term> terms;
  };

  void add_bound_rows(const Model& m, const Def& d) {
    double lo = d.c0;
    double hi = d.c0;
    for (const auto& t : d.terms) {
      const auto& v = m.variable(t.var);
      lo += t.coef > 0 ? t.coef * v.lower : t.coef * v.upper;
      hi += t.coef > 0 ? t.coef * v.upper : t.coef * v.lower;
    }
    const auto& v = m.variable(d.var);
    auto slack_tol = [](double b) { return 1e-9 * (1.0 + std::abs(b)); };
    const auto tag = v.name.empty() ? std::string("bound") : "bound:" + v.name;
    if (std::isfinite(v.lower) && !(lo >= v.lower - slack_tol(v.lower))) {
      LinearConstraint r{d.terms, RowSense::ge, v.lower - d.c0, tag};
      reduced_.add_constraint(std::move(r));
    }
    if (std::isfinite(v.upper) && !(hi <= v.upper + slack_tol(v.upper))) {
      LinearConstraint r{d.terms, RowSense::le, v.upper - d.c0, tag};
      reduced_.add_constraint(std::move(r));
    }
  }

  std::vector<Def> defs_;
  std::vector<int> def_of_;
  Model reduced_;
  double offset_ = 0.0;
  mutable std::vector<Term> scratch_;
};

struct Node {
  std::vector<std::pair<int, double>> fix_lower;  // var, new lower
  std::vector<std::pair<int, double>> fix_upper;  // var, new upper
  double key = -kInf;                             // minimization-form bound
  int depth = 0;
  long id = 0;
  int branch_var = -1;  // the variable whose bound created this node
  bool branch_up = false;
  double step = 0.0;  // distance the branch moved that variable
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.key != b.key) return a.key > b.key;
    return a.id < b.id;  // newer first on ties
  }
};

class BranchAndCut {
 public:
  BranchAndCut(const Model& m, const LazyOracle& oracle, const Limits& limits)
      : model_(m), oracle_(oracle), limits_(limits), agg_(m), lp_(agg_.reduced()),
        sign_(m.objective_sense() == ObjSense::maximize ? -1.0 : 1.0) {
    for (int j = 0; j < m.variable_count(); ++j) {
      const auto& v = m.variable(j);
      double lo = v.lower;
      double hi = v.upper;
      if (v.integer) {
        lo = std::ceil(lo - limits.integrality_tol);
        hi = std::floor(hi + limits.integrality_tol);
        integers_.push_back(j);
      }
      root_lo_.push_back(lo);
      root_hi_.push_back(hi);
      if (!agg_.eliminated(j) && (lo != v.lower || hi != v.upper)) lp_.set_bounds(j, lo, hi);
    }
    cur_lo_ = root_lo_;
    cur_hi_ = root_hi_;
    if (limits.cutoff) cutoff_min_ = sign_ * *limits.cutoff;
    pc_up_.resize(root_lo_.size());
    pc_down_.resize(root_lo_.size());
  }

  MilpSolution run(const std::vector<double>* start) {
    t0_ = Clock::now();
    if (start) offer_heuristic(*start);

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push(Node{{}, {}, -kInf, 0, next_id_++});
    bool hit_limit = false;
    bool unbounded = false;

    while (!open.empty()) {
      if (node_count_ >= limits_.max_nodes || seconds_since(t0_) > limits_.time_limit) {
        hit_limit = true;
        break;
      }
      Node node = open.top();
      open.pop();
      if (prunable(node.key)) {
        pruned_bound_ = std::min(pruned_bound_, node.key);
        continue;
      }
      ++node_count_;
      apply_bounds(node);
      const auto outcome = process(node, open);
      if (outcome == Outcome::unbounded) {
        unbounded = true;
        break;
      }
      record_bound(open);
    }

    MilpSolution sol;
    sol.node_count = node_count_;
    sol.cut_count = lazy_cuts_;
    sol.user_cut_count = user_cuts_;
    sol.lp_iterations = lp_.iterations();
    sol.added_rows = std::move(added_);
    sol.bound_history = std::move(history_);
    if (unbounded) {
      sol.status = Status::unbounded;
    } else if (hit_limit) {
      sol.status = Status::limit;
    } else {
      sol.status = incumbent_ ? Status::optimal : Status::infeasible;
    }
    double bound = hit_limit ? std::min(global_bound(open), pruned_bound_) : std::min(incumbent_value(), pruned_bound_);
    if (incumbent_) {
      sol.has_incumbent = true;
      sol.values = *incumbent_;
      sol.objective = model_.objective_value(sol.values);
      bound = std::min(bound, incumbent_value());
    }
    sol.dual_bound = std::isfinite(bound) ? sign_ * bound : sign_ * -kInf;
    if (sol.status == Status::optimal) sol.dual_bound = sign_ * std::min(bound, incumbent_value());
    sol.wall_time = seconds_since(t0_);
    return sol;
  }

 private:
  enum class Outcome { pruned, branched, integral, unbounded };

  /// LP optimum in minimization form, including the constant removed by aggregation.
  double lp_objective() const { return lp_.objective() + sign_ * agg_.objective_offset(); }

  double incumbent_value() const { return incumbent_ ? inc_min_ : kInf; }

  double gap_tol() const {
    return std::max(limits_.abs_gap, limits_.rel_gap * std::abs(incumbent_value()));
  }

  bool prunable(double key) const {
    if (incumbent_ && key >= inc_min_ - gap_tol()) return true;
    return key >= cutoff_min_ - std::max(limits_.abs_gap, limits_.rel_gap * std::abs(cutoff_min_));
  }

  double global_bound(const std::priority_queue<Node, std::vector<Node>, NodeOrder>& open) const {
    double b = incumbent_value();
    if (!open.empty()) b = std::min(b, open.top().key);
    return b;
  }

  void record_bound(const std::priority_queue<Node, std::vector<Node>, NodeOrder>& open) {
    double b = std::min(global_bound(open), pruned_bound_);
    // Bounds only tighten; a stale queue key never loosens the reported value.
    if (!history_min_.empty()) b = std::max(b, history_min_.back());
    history_min_.push_back(b);
    history_.push_back(sign_ * b);
  }

  void apply_bounds(const Node& node) {
    std::vector<double> lo(integers_.size());
    std::vector<double> hi(integers_.size());
    for (std::size_t k = 0; k < integers_.size(); ++k) {
      lo[k] = root_lo_[static_cast<std::size_t>(integers_[k])];
      hi[k] = root_hi_[static_cast<std::size_t>(integers_[k])];
    }
    auto slot = [&](int var) {
      return static_cast<std::size_t>(std::lower_bound(integers_.begin(), integers_.end(), var) - integers_.begin());
    };
    for (auto [v, b] : node.fix_lower) lo[slot(v)] = std::max(lo[slot(v)], b);
    for (auto [v, b] : node.fix_upper) hi[slot(v)] = std::min(hi[slot(v)], b);
    for (std::size_t k = 0; k < integers_.size(); ++k) {
      const auto j = static_cast<std::size_t>(integers_[k]);
      if (cur_lo_[j] != lo[k] || cur_hi_[j] != hi[k]) {
        cur_lo_[j] = lo[k];
        cur_hi_[j] = hi[k];
        lp_.set_bounds(integers_[k], lo[k], hi[k]);
      }
    }
  }

  LpStatus resolve() {
    LpStatus st = lp_.solve(kLpIterationCap);
    if (st == LpStatus::iteration_limit) {
      lp_.refactor();
      st = lp_.primal(kLpIterationCap);
    }
    return st;
  }

  std::vector<double> current_point() const {
    const auto& x = lp_.values();
    std::vector<double> out(x.begin(), x.begin() + model_.variable_count());
    agg_.expand(out);
    return out;
  }

  int branching_variable(const std::vector<double>& x) const {
    if (limits_.branching == Branching::pseudocost) return pseudocost_variable(x);
    int best = -1;
    double best_frac = limits_.integrality_tol;
    for (int j : integers_) {
      const double v = x[static_cast<std::size_t>(j)];
      const double frac = std::abs(v - std::round(v));
      if (frac > best_frac + 1e-12) {
        best_frac = frac;
        best = j;
      }
    }
    return best;
  }

  struct Pseudocost {
    double sum = 0.0;
    int count = 0;
  };

  void learn(const Node& node, double z) {
    if (node.branch_var < 0 || node.step <= 0.0) return;
    auto& pc = (node.branch_up ? pc_up_ : pc_down_)[static_cast<std::size_t>(node.branch_var)];
    const double gain = std::max(0.0, z - node.key) / node.step;
    pc.sum += gain;
    ++pc.count;
    auto& all = node.branch_up ? all_up_ : all_down_;
    all.sum += gain;
    ++all.count;
  }

  int pseudocost_variable(const std::vector<double>& x) const {
    auto mean = [](const Pseudocost& pc, const Pseudocost& fallback) {
      if (pc.count > 0) return pc.sum / pc.count;
      return fallback.count > 0 ? fallback.sum / fallback.count : 1.0;
    };
    int best = -1;
    double best_score = -1.0;
    for (int j : integers_) {
      const double v = x[static_cast<std::size_t>(j)];
      if (std::abs(v - std::round(v)) <= limits_.integrality_tol) continue;
      const double f = v - std::floor(v);
      const double down = mean(pc_down_[static_cast<std::size_t>(j)], all_down_) * f;
      const double up = mean(pc_up_[static_cast<std::size_t>(j)], all_up_) * (1.0 - f);
      const double score = std::max(down, 1e-6) * std::max(up, 1e-6);
      if (score > best_score * (1.0 + 1e-12)) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  int add_cuts(const std::vector<LinearConstraint>& cuts, const std::vector<double>& point, bool lazy) {
    int added = 0;
    for (const auto& cut : cuts) {
      for (const auto& t : cut.terms)
        if (t.var < 0 || t.var >= model_.variable_count()) throw ModelError("cut references unknown variable");
      if (cut.slack(point) >= -limits_.feasibility_tol) continue;
      if (!seen_.insert(row_hash(cut)).second) continue;
      mapped_.push_back(agg_.map(cut));
      lp_.add_row(mapped_.back());
      lp_cuts_.push_back(static_cast<int>(added_.size()));
      added_.push_back(cut);
      in_lp_.push_back(1);
      age_.push_back(0);
      ++added;
      if (lazy) ++lazy_cuts_;
      else ++user_cuts_;
    }
    return added;
  }

  /// Re-adds pooled cuts that x violates; returns how many.
  int restore_pool_cuts(const std::vector<double>& x) {
    int restored = 0;
    for (std::size_t c = 0; c < added_.size(); ++c) {
      if (in_lp_[c] || added_[c].slack(x) >= -limits_.feasibility_tol) continue;
      lp_.add_row(mapped_[c]);
      lp_cuts_.push_back(static_cast<int>(c));
      in_lp_[c] = 1;
      age_[c] = 0;
      ++restored;
    }
    return restored;
  }

  /// Ages cut rows that are slack at the current optimum and drops the stale ones.
  void purge_slack_cuts() {
    const int base = agg_.reduced().constraint_count();
    std::vector<int> drop;
    std::vector<int> keep;
    for (std::size_t i = 0; i < lp_cuts_.size(); ++i) {
      const int row = base + static_cast<int>(i);
      const auto c = static_cast<std::size_t>(lp_cuts_[i]);
      if (lp_.slack_basic(row) && std::abs(lp_.slack_value(row)) > 1e-6) ++age_[c];
      else age_[c] = 0;
      if (age_[c] >= kCutMaxAge) {
        drop.push_back(row);
        in_lp_[c] = 0;
        age_[c] = 0;
      } else {
        keep.push_back(lp_cuts_[i]);
      }
    }
    if (drop.empty()) return;
    lp_.remove_rows(drop);
    lp_cuts_ = std::move(keep);
  }

  bool feasible_for_rows(const std::vector<double>& x) const {
    if (x.size() != static_cast<std::size_t>(model_.variable_count())) return false;
    const double tol = limits_.feasibility_tol;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[j] < root_lo_[j] - tol || x[j] > root_hi_[j] + tol) return false;
    for (int j : integers_)
      if (std::abs(x[static_cast<std::size_t>(j)] - std::round(x[static_cast<std::size_t>(j)])) > limits_.integrality_tol)
        return false;
    for (const auto& r : model_.constraints())
      if (r.slack(x) < -tol) return false;
    for (const auto& r : added_)
      if (r.slack(x) < -tol) return false;
    return true;
  }

  Candidate candidate(const std::vector<double>& x) const {
    Candidate c;
    c.values = x;
    c.dual_bound = sign_ * (history_min_.empty() ? -kInf : history_min_.back());
    if (incumbent_) c.incumbent = model_.objective_value(*incumbent_);
    c.node_count = node_count_;
    return c;
  }

  void offer_heuristic(std::vector<double> x) {
    for (int j : integers_) x[static_cast<std::size_t>(j)] = std::round(x[static_cast<std::size_t>(j)]);
    if (!feasible_for_rows(x)) return;
    const double z = sign_ * model_.objective_value(x);
    if (incumbent_ && z >= inc_min_ - gap_tol()) return;
    if (oracle_.integral) {
      auto res = oracle_.integral(candidate(x));
      if (add_cuts(res.cuts, x, true) > 0) return;
    }
    incumbent_ = std::move(x);
    inc_min_ = z;
  }

  void handle_heuristic(SeparationResult& res) {
    if (res.heuristic) offer_heuristic(std::move(*res.heuristic));
  }

  Outcome process(const Node& node, std::priority_queue<Node, std::vector<Node>, NodeOrder>& open) {
    LpStatus st = resolve();
    if (st == LpStatus::optimal) learn(node, lp_objective());
    int rounds = 0;
    const int max_rounds = node.depth == 0 ? limits_.root_cut_rounds : limits_.node_cut_rounds;
    double last_z = -kInf;
    int stalls = 0;
    while (true) {
      if (st == LpStatus::infeasible) return Outcome::pruned;
      if (st == LpStatus::unbounded) return Outcome::unbounded;
      if (st == LpStatus::iteration_limit) return Outcome::pruned;
      const double z = lp_objective();
      if (prunable(z)) {
        pruned_bound_ = std::min(pruned_bound_, z);
        return Outcome::pruned;
      }
      std::vector<double> x = current_point();
      if (restore_pool_cuts(x) > 0) {
        st = resolve();
        continue;
      }
      const int bvar = branching_variable(x);
      if (bvar < 0) {
        for (int j : integers_) x[static_cast<std::size_t>(j)] = std::round(x[static_cast<std::size_t>(j)]);
        if (oracle_.integral) {
          auto res = oracle_.integral(candidate(x));
          const int added = add_cuts(res.cuts, x, true);
          handle_heuristic(res);
          if (added > 0) {
            st = resolve();
            continue;
          }
        }
        const double zc = sign_ * model_.objective_value(x);
        if (!incumbent_ || zc < inc_min_) {
          incumbent_ = std::move(x);
          inc_min_ = zc;
        }
        return Outcome::integral;
      }
      if (oracle_.fractional && rounds < max_rounds && stalls < 3) {
        auto res = oracle_.fractional(candidate(x));
        ++rounds;
        const int added = add_cuts(res.cuts, x, false);
        handle_heuristic(res);
        if (added > 0) {
          if (z - last_z < 1e-6 * (1.0 + std::abs(z))) ++stalls;
          else stalls = 0;
          last_z = z;
          st = resolve();
          continue;
        }
      }
      purge_slack_cuts();
      const double xv = x[static_cast<std::size_t>(bvar)];
      Node up{node.fix_lower, node.fix_upper, z, node.depth + 1, next_id_++, bvar, true, std::ceil(xv) - xv};
      up.fix_lower.emplace_back(bvar, std::ceil(xv));
      Node down{node.fix_lower, node.fix_upper, z, node.depth + 1, next_id_++, bvar, false, xv - std::floor(xv)};
      down.fix_upper.emplace_back(bvar, std::floor(xv));
      open.push(std::move(down));
      open.push(std::move(up));
      return Outcome::branched;
    }
  }

  const Model& model_;
  const LazyOracle& oracle_;
  Limits limits_;
  Aggregation agg_;
  Tableau lp_;
  double sign_;
  std::vector<int> integers_;
  std::vector<double> root_lo_, root_hi_, cur_lo_, cur_hi_;
  std::vector<Pseudocost> pc_up_, pc_down_;
  Pseudocost all_up_, all_down_;
  std::optional<std::vector<double>> incumbent_;
  double inc_min_ = kInf;
  double cutoff_min_ = kInf;
  double pruned_bound_ = kInf;
  std::unordered_set<std::uint64_t> seen_;
  std::vector<LinearConstraint> added_;  // cut pool, global
  std::vector<LinearConstraint> mapped_;  // pooled cuts in the reduced space
  std::vector<char> in_lp_;              // per pooled cut
  std::vector<int> age_;                 // consecutive slack node solves
  std::vector<int> lp_cuts_;             // pool index of each LP row past the model rows
  std::vector<double> history_, history_min_;
  long node_count_ = 0;
  long lazy_cuts_ = 0;
  long user_cuts_ = 0;
  long next_id_ = 0;
  Clock::time_point t0_;
};

}  // namespace

MilpSolution solve_lp(const Model& m) {
  m.validate();
  const auto t0 = Clock::now();
  Tableau lp(m);
  const LpStatus st = lp.primal(kLpIterationCap);
  MilpSolution sol;
  sol.lp_iterations = lp.iterations();
  switch (st) {
    case LpStatus::optimal: sol.status = Status::optimal; break;
    case LpStatus::infeasible: sol.status = Status::infeasible; break;
    case LpStatus::unbounded: sol.status = Status::unbounded; break;
    case LpStatus::iteration_limit: sol.status = Status::limit; break;
  }
  if (st == LpStatus::optimal) {
    const auto& x = lp.values();
    sol.values.assign(x.begin(), x.begin() + m.variable_count());
    sol.has_incumbent = true;
    sol.objective = m.objective_value(sol.values);
    sol.dual_bound = sol.objective;
  }
  sol.wall_time = seconds_since(t0);
  return sol;
}

MilpSolution solve_milp(const Model& m, const LazyOracle& oracle, const Limits& limits,
                        const std::vector<double>* start) {
  m.validate();
  BranchAndCut bc(m, oracle, limits);
  return bc.run(start);
}

std::string to_lp_format(const Model& m) {
  auto name = [&](int j) {
    const auto& v = m.variable(j);
    return v.name.empty() ? "v" + std::to_string(j) : v.name;
  };
  auto expr = [&](const std::vector<Term>& terms) {
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (const auto& t : terms) {
      if (!first || t.coef < 0) os << (t.coef < 0 ? " - " : " + ");
      os << std::abs(t.coef) << ' ' << name(t.var);
      first = false;
    }
    if (terms.empty()) os << "0";
    return os.str();
  };
  std::ostringstream os;
  os.precision(17);
  os << (m.objective_sense() == ObjSense::maximize ? "Maximize\n" : "Minimize\n");
  os << " obj: " << expr(m.objective()) << "\nSubject To\n";
  for (int r = 0; r < m.constraint_count(); ++r) {
    const auto& row = m.constraints()[static_cast<std::size_t>(r)];
    const char* op = row.sense == RowSense::le ? "<=" : row.sense == RowSense::ge ? ">=" : "=";
    os << " c" << r << ": " << expr(row.terms) << ' ' << op << ' ' << row.rhs << '\n';
  }
  os << "Bounds\n";
  for (int j = 0; j < m.variable_count(); ++j) {
    const auto& v = m.variable(j);
    os << ' ';
    if (std::isinf(v.lower)) os << "-inf";
    else os << v.lower;
    os << " <= " << name(j) << " <= ";
    if (std::isinf(v.upper)) os << "+inf";
    else os << v.upper;
    os << '\n';
  }
  os << "Generals\n";
  for (int j = 0; j < m.variable_count(); ++j)
    if (m.variable(j).integer) os << ' ' << name(j) << '\n';
  os << "End\n";
  return os.str();
}

}  // namespace acnet::milp
