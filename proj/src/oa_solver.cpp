#include "acnet/oa_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <bit>
#include <set>

namespace acnet {

using milp::LinearConstraint;
using milp::RowSense;

std::string to_string(OAStatus s) {
  switch (s) {
    case OAStatus::optimal: return "optimal";
    case OAStatus::bound: return "bound";
    case OAStatus::limit: return "limit";
    case OAStatus::cutoff: return "cutoff";
  }
  return "unknown";
}

double initial_upper_bound(const WeightedGraph& g) {
  return std::max(0.0, algebraic_connectivity(weighted_laplacian(g, EdgeSelection::all(g))).lambda2);
}

LinearConstraint eigenvector_cut(const DesignModel& dm, const SubmatrixIndex& j, std::span<const double> v) {
  const std::size_t m = j.size();
  if (v.size() != m) throw OAError("eigenvector_cut: vector length does not match index set");
  if (m == 0) throw OAError("eigenvector_cut: empty index set");
  for (int idx : j.indices)
    if (idx < 1 || idx > dm.n) throw OAError("eigenvector_cut: index out of range");
  LinearConstraint row{{}, RowSense::ge, 0.0, "eigen:" + std::to_string(m)};
  for (std::size_t a = 0; a < m; ++a) {
    const double d = v[a] * v[a];
    if (d > 1e-14) row.terms.push_back({dm.w_var(j.indices[a], j.indices[a]), d});
    for (std::size_t b = a + 1; b < m; ++b) {
      const double off = 2.0 * v[a] * v[b];
      if (std::abs(off) > 1e-14) row.terms.push_back({dm.w_var(j.indices[a], j.indices[b]), off});
    }
  }
  return row;
}

std::vector<LinearConstraint> soc_oa_cuts(const DesignModel& dm, const SymMatrix& w_star,
                                          const std::vector<std::pair<NodeId, NodeId>>& pairs) {
  std::vector<LinearConstraint> out;
  for (auto [i, j] : pairs) {
    if (i == j || i < 1 || j < 1 || i > dm.n || j > dm.n) throw OAError("soc_oa_cuts: bad pair");
    const auto a = static_cast<std::size_t>(i - 1);
    const auto b = static_cast<std::size_t>(j - 1);
    const double wii = w_star(a, a);
    if (wii < 1e-9) throw OAError("soc_oa_cuts: diagonal entry too small to linearize at");
    const double r = w_star(a, b) / wii;
    // (W*_ij/W*_ii²)(2W*_ii Ŵ_ij − W*_ij Ŵ_ii) ≤ Ŵ_jj  ⇔  2r Ŵ_ij − r² Ŵ_ii − Ŵ_jj ≤ 0
    LinearConstraint row{{}, RowSense::le, 0.0, "soc"};
    if (r != 0.0) {
      row.terms.push_back({dm.w_var(i, j), 2.0 * r});
      row.terms.push_back({dm.w_var(i, i), -r * r});
    }
    row.terms.push_back({dm.w_var(j, j), -1.0});
    out.push_back(std::move(row));
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool tag_starts(const LinearConstraint& r, const char* prefix) { return r.tag.rfind(prefix, 0) == 0; }

std::vector<int> normalized_sizes(const OAConfig& cfg, int n) {
  std::vector<int> sizes = cfg.sizes.empty() ? std::vector<int>{n} : cfg.sizes;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  for (int m : sizes)
    if (m < 1 || m > n) throw OAError("submatrix size " + std::to_string(m) + " outside [1, n]");
  if (!(cfg.eps_psd > 0.0) || !(cfg.eps_opt > 0.0)) throw OAError("tolerances must be positive");
  return sizes;
}

/// Shared state of one Algorithm 1 run.
class Run {
 public:
  Run(const WeightedGraph& g, const DesignModel& dm, const OAConfig& cfg)
      : g_(g), dm_(dm), cfg_(cfg), sizes_(normalized_sizes(cfg, g.node_count())), t0_(Clock::now()) {
    res_.tree = EdgeSelection(g.edge_count());
    gamma_u_ = initial_upper_bound(g);
    if (cfg.kelley_initial_bound) gamma_u_ = std::min(gamma_u_, kelley_relaxation_bound(g, cfg.eps_psd));
    gamma_u_ = std::min(gamma_u_, dm.gamma_cap);
  }

  OAResult run() {
    work_ = dm_;
    add_tree_rows(work_, g_);
    seed_with_stars();
    if (cfg_.mode == OAMode::lazy) run_lazy();
    else run_outer();
    res_.wall_time = since(t0_);
    res_.lower_bound = best_lb_;
    res_.upper_bound = gamma_u_;
    res_.gap_percent = best_lb_ > 0.0 ? 100.0 * (gamma_u_ - best_lb_) / best_lb_ : 0.0;
    return std::move(res_);
  }

 private:
  bool exact() const { return sizes_.back() == dm_.n; }

  double gap() const { return (gamma_u_ - best_lb_) / (gamma_u_ + 1e-6); }

  /// λ2 of an integral spanning tree; keeps the first tree attaining the best value.
  double consider(const EdgeSelection& x) {
    const double l2 = algebraic_connectivity(weighted_laplacian(g_, x)).lambda2;
    if (!have_tree_ || l2 > best_lb_) {
      best_lb_ = l2;
      res_.tree = x;
      have_tree_ = true;
    }
    return l2;
  }

  /// Model point for tree x at γ = λ2(x), keeping the remaining columns of `base`.
  std::vector<double> lifted_point(std::vector<double> base, const EdgeSelection& x, double l2) const {
    const auto p = work_.point(g_, x, std::min(l2, work_.gamma_cap));
    for (std::size_t e = 0; e < work_.x_map.size(); ++e) base[static_cast<std::size_t>(work_.x_map[e])] = p[static_cast<std::size_t>(work_.x_map[e])];
    base[static_cast<std::size_t>(work_.gamma_index)] = p[static_cast<std::size_t>(work_.gamma_index)];
    for (int v : work_.w_map) base[static_cast<std::size_t>(v)] = p[static_cast<std::size_t>(v)];
    return base;
  }

  /// Best feasible star (hub with every spoke allowed) as LB seed and MIP start.
  void seed_with_stars() {
    const int n = g_.node_count();
    for (NodeId h = 1; h <= n; ++h) {
      EdgeSelection x(g_.edge_count());
      bool ok = true;
      for (NodeId j = 1; j <= n && ok; ++j) {
        if (j == h) continue;
        const int e = g_.edge_index(h, j);
        if (e < 0) ok = false;
        else x.set(static_cast<std::size_t>(e));
      }
      if (!ok) continue;
      const double l2 = algebraic_connectivity(weighted_laplacian(g_, x)).lambda2;
      std::vector<double> p = work_.point(g_, x, std::min(l2, work_.gamma_cap));
      if (work_.has_center()) p[static_cast<std::size_t>(work_.y_var(h))] = 1.0;
      if (work_.model.max_violation(p) > 1e-9) continue;
      if (!start_ || l2 > start_lb_) {
        start_ = p;
        start_lb_ = l2;
        start_tree_ = x;
      }
    }
    if (start_) consider(start_tree_);
  }

  /// PSD cuts for W*, sizes ascending. `full_eigs` adds every negative
  /// eigenvector of the full matrix instead of only the smallest one.
  std::vector<LinearConstraint> psd_cuts(const SymMatrix& w, TraceRow& row, const std::vector<int>& sizes,
                                         int full_eigs) {
    std::vector<LinearConstraint> cuts;
    auto capped = [&] { return cfg_.max_cuts_per_round > 0 && static_cast<long>(cuts.size()) >= cfg_.max_cuts_per_round; };
    for (int m : sizes) {
      if (capped()) break;
      if (m == dm_.n && full_eigs > 1) {
        const auto eig = sym_eigen(w);
        SubmatrixIndex all;
        for (int i = 1; i <= dm_.n; ++i) all.indices.push_back(i);
        for (std::size_t k = 0; k < eig.values.size() && static_cast<int>(k) < full_eigs && !capped(); ++k) {
          if (eig.values[k] > -cfg_.eps_psd) break;
          const auto v = eig.vector(k);
          cuts.push_back(eigenvector_cut(dm_, all, v));
          ++row.cuts_by_size[m];
        }
        continue;
      }
      const auto viols = violated_submatrices(w, m, cfg_.eps_psd);
      for (const auto& viol : viols) {
        if (capped()) break;
        cuts.push_back(eigenvector_cut(dm_, viol.index, viol.min_eigenvector));
        ++row.cuts_by_size[m];
        if (cfg_.soc_mode && m == 2) {
          const NodeId a = viol.index.indices[0];
          const NodeId b = viol.index.indices[1];
          std::vector<std::pair<NodeId, NodeId>> pairs;
          if (w(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(a - 1)) >= 1e-9) pairs.emplace_back(a, b);
          if (w(static_cast<std::size_t>(b - 1), static_cast<std::size_t>(b - 1)) >= 1e-9) pairs.emplace_back(b, a);
          for (auto& c : soc_oa_cuts(dm_, w, pairs)) {
            cuts.push_back(std::move(c));
            ++row.soc_cuts;
          }
        }
      }
    }
    return cuts;
  }

  void push_trace(TraceRow row, double bound) {
    row.iteration = ++iteration_;
    row.gamma_u = std::min(gamma_u_, bound);
    row.lower_bound = best_lb_;
    row.wall_time = since(t0_);
    res_.trace.push_back(std::move(row));
  }

  void absorb_rows(const std::vector<LinearConstraint>& rows) {
    for (const auto& r : rows) {
      if (tag_starts(r, "eigen")) ++res_.eigen_cut_count;
      else if (tag_starts(r, "soc")) ++res_.soc_cut_count;
      else if (tag_starts(r, "topology")) ++res_.topology_cut_count;
      else if (tag_starts(r, "subset")) ++res_.subset_cut_count;
      if (cfg_.record_cuts && !tag_starts(r, "topology")) res_.recorded_cuts.push_back(r);
    }
  }

  milp::Limits limits() const {
    milp::Limits lim = cfg_.milp_limits;
    lim.time_limit = std::min(lim.time_limit, std::max(0.0, cfg_.time_limit - since(t0_)));
    return lim;
  }

  milp::SeparationResult integral_topology(const std::vector<double>& values, EdgeSelection& x) const {
    milp::SeparationResult r;
    x = work_.selection(values);
    r.cuts = topology_cuts(work_, g_, x);
    return r;
  }

  milp::SeparationResult fractional(const milp::Candidate& c) {
    milp::SeparationResult r;
    std::vector<double> cap(work_.x_map.size());
    for (std::size_t e = 0; e < cap.size(); ++e) cap[e] = c.values[static_cast<std::size_t>(work_.x_map[e])];
    const MinCut mc = global_min_cut(g_, cap);
    if (mc.value < 1.0 - 1e-6 && !mc.side.empty() && static_cast<int>(mc.side.size()) < g_.node_count()) {
      const NodeCut cut = make_cut(g_, mc.side);
      LinearConstraint row{{}, RowSense::ge, 1.0, "topology"};
      for (auto e : cut.cut_edges) row.terms.push_back({work_.x_var(static_cast<int>(e)), 1.0});
      r.cuts.push_back(std::move(row));
    }
    if (exact())
      for (auto& cut : subset_cuts(c.values)) r.cuts.push_back(std::move(cut));
    TraceRow unused;
    for (auto& cut : psd_cuts(work_.w_matrix(c.values), unused, sizes_, 3)) r.cuts.push_back(std::move(cut));
    return r;
  }

  /// Most violated subset cuts at x*; every subset containing node 1 is tried.
  std::vector<LinearConstraint> subset_cuts(std::span<const double> values) const {
    const int n = g_.node_count();
    std::vector<LinearConstraint> out;
    if (cfg_.subset_cuts_per_round <= 0 || n > 16 || n < 2) return out;
    const double gamma = work_.gamma(values);
    const auto un = static_cast<std::size_t>(n);
    // a[u][v] = w_uv x_uv; node n is kept outside S so each cut is visited once.
    std::vector<double> a(un * un, 0.0);
    std::vector<double> deg(un, 0.0);
    for (std::size_t e = 0; e < g_.edge_count(); ++e) {
      const Edge& ed = g_.edge(e);
      const double v = ed.w * values[static_cast<std::size_t>(work_.x_map[e])];
      const auto i = static_cast<std::size_t>(ed.i - 1);
      const auto j = static_cast<std::size_t>(ed.j - 1);
      a[i * un + j] = a[j * un + i] = v;
      deg[i] += v;
      deg[j] += v;
    }
    std::vector<std::pair<double, unsigned>> found;
    std::vector<double> inner(un, 0.0);  // Σ_{u∈S} a[v][u]
    unsigned mask = 0;
    double cut = 0.0;
    const unsigned steps = 1u << (n - 1);
    for (unsigned t = 1; t < steps; ++t) {
      const auto v = static_cast<std::size_t>(std::countr_zero(t));
      const bool adding = !((mask >> v) & 1u);
      // Moving v across changes the cut by deg(v) − 2·(weight from v into its old side).
      const double sign = adding ? 1.0 : -1.0;
      cut += sign * (deg[v] - 2.0 * inner[v]);
      mask ^= 1u << v;
      for (std::size_t u = 0; u < un; ++u) inner[u] += sign * a[u * un + v];
      const int s = std::popcount(mask);
      const double viol = gamma - n * cut / (s * (n - s));
      if (viol > 1e-6) found.emplace_back(viol, mask);
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
    if (found.size() > static_cast<std::size_t>(cfg_.subset_cuts_per_round)) found.resize(static_cast<std::size_t>(cfg_.subset_cuts_per_round));
    for (auto [viol, mask] : found) {
      const int s = std::popcount(mask);
      const double f = static_cast<double>(n) / (s * (n - s));
      LinearConstraint row{{}, RowSense::ge, 0.0, "subset"};
      for (std::size_t e = 0; e < g_.edge_count(); ++e) {
        const Edge& ed = g_.edge(e);
        if (((mask >> (ed.i - 1)) & 1u) != ((mask >> (ed.j - 1)) & 1u))
          row.terms.push_back({work_.x_var(static_cast<int>(e)), f * ed.w});
      }
      row.terms.push_back({work_.gamma_index, -1.0});
      out.push_back(std::move(row));
    }
    return out;
  }

  void run_lazy() {
    milp::LazyOracle oracle;
    oracle.integral = [this](const milp::Candidate& c) {
      std::vector<double> values(c.values.begin(), c.values.end());
      EdgeSelection x;
      auto r = integral_topology(values, x);
      TraceRow row;
      if (!r.cuts.empty()) {
        row.topology_cuts = static_cast<int>(r.cuts.size());
        push_trace(std::move(row), c.dual_bound);
        return r;
      }
      const double l2 = consider(x);
      r.cuts = psd_cuts(work_.w_matrix(values), row, sizes_, 1);
      if (!r.cuts.empty()) {
        push_trace(std::move(row), c.dual_bound);
        if (work_.gamma(values) > l2 + 1e-12) r.heuristic = lifted_point(std::move(values), x, l2);
      }
      return r;
    };
    if (cfg_.fractional_cuts) oracle.fractional = [this](const milp::Candidate& c) { return fractional(c); };
    else if (cfg_.subset_cuts_per_round > 0 && exact())
      oracle.fractional = [this](const milp::Candidate& c) {
        milp::SeparationResult r;
        r.cuts = subset_cuts(c.values);
        return r;
      };

    const auto sol = milp::solve_milp(work_.model, oracle, limits(), start_ ? &*start_ : nullptr);
    res_.milp_solve_count = 1;
    res_.node_count = sol.node_count;
    absorb_rows(sol.added_rows);
    for (double b : sol.bound_history) res_.upper_bound_history.push_back(std::min(gamma_u_, b));
    if (sol.has_incumbent) consider(work_.selection(sol.values));
    if (sol.status == milp::Status::optimal) {
      gamma_u_ = std::min(gamma_u_, sol.dual_bound);
      res_.status = exact() ? OAStatus::optimal : OAStatus::bound;
    } else if (sol.status == milp::Status::limit) {
      gamma_u_ = std::min(gamma_u_, sol.dual_bound);
      res_.status = OAStatus::limit;
    } else {
      res_.status = OAStatus::limit;
    }
    const auto& cut = cfg_.milp_limits.cutoff;
    if (cut && sol.status == milp::Status::optimal && best_lb_ <= *cut + 1e-9 * (1.0 + std::abs(*cut)))
      res_.status = OAStatus::cutoff;
    else if (res_.status == OAStatus::optimal && gap() > cfg_.eps_opt)
      res_.status = OAStatus::limit;
  }

  void run_outer() {
    milp::LazyOracle oracle;
    oracle.integral = [this](const milp::Candidate& c) {
      std::vector<double> values(c.values.begin(), c.values.end());
      EdgeSelection x;
      return integral_topology(values, x);
    };
    bool limit = false;
    res_.upper_bound_history.push_back(gamma_u_);
    for (int m : sizes_) {
      while (true) {
        if (iteration_ >= cfg_.max_iterations || since(t0_) > cfg_.time_limit) {
          limit = true;
          break;
        }
        const auto sol = milp::solve_milp(work_.model, oracle, limits(), start_ ? &*start_ : nullptr);
        ++res_.milp_solve_count;
        res_.node_count += sol.node_count;
        absorb_rows(sol.added_rows);
        for (const auto& r : sol.added_rows) work_.model.add_constraint(r);
        if (!sol.has_incumbent) {
          limit = true;
          break;
        }
        gamma_u_ = std::min(gamma_u_, sol.status == milp::Status::optimal ? sol.objective : sol.dual_bound);
        if (sol.status != milp::Status::optimal) limit = true;
        res_.upper_bound_history.push_back(gamma_u_);
        const EdgeSelection x = work_.selection(sol.values);
        const double l2 = consider(x);
        // The lifted best tree satisfies every valid cut, so it stays a usable start.
        if (res_.tree == x) start_ = lifted_point(sol.values, x, l2);
        if (limit) break;

        const SymMatrix w = work_.w_matrix(sol.values);
        TraceRow row;
        std::vector<LinearConstraint> cuts = psd_cuts(w, row, {m}, 1);
        if (cuts.empty() && m == dm_.n && gap() > cfg_.eps_opt) {
          // Gap open but W* inside the PSD tolerance: take the smallest eigenvector anyway.
          const auto eig = sym_eigen(w);
          SubmatrixIndex all;
          for (int i = 1; i <= dm_.n; ++i) all.indices.push_back(i);
          auto cut = eigenvector_cut(dm_, all, eig.vector(0));
          if (cut.slack(sol.values) < -1e-9) {
            cuts.push_back(std::move(cut));
            ++row.cuts_by_size[m];
          }
        }
        std::vector<LinearConstraint> added;
        for (auto& c : cuts)
          if (c.slack(sol.values) < -1e-9) added.push_back(std::move(c));
        push_trace(std::move(row), gamma_u_);
        if (added.empty()) break;
        absorb_rows(added);
        for (auto& c : added) work_.model.add_constraint(std::move(c));
      }
      if (limit) break;
    }
    if (limit) res_.status = OAStatus::limit;
    else if (exact()) res_.status = gap() <= cfg_.eps_opt ? OAStatus::optimal : OAStatus::limit;
    else res_.status = OAStatus::bound;
  }

  const WeightedGraph& g_;
  const DesignModel& dm_;
  const OAConfig& cfg_;
  std::vector<int> sizes_;
  Clock::time_point t0_;
  DesignModel work_;
  OAResult res_;
  double gamma_u_ = 0.0;
  double best_lb_ = 0.0;
  bool have_tree_ = false;
  std::optional<std::vector<double>> start_;
  double start_lb_ = 0.0;
  EdgeSelection start_tree_;
  int iteration_ = 0;
};

}  // namespace

OAResult run_algorithm1(const WeightedGraph& g, const DesignModel& dm, const OAConfig& cfg) {
  if (dm.n != g.node_count() || dm.x_map.size() != g.edge_count())
    throw OAError("design model was not built from this graph");
  Run run(g, dm, cfg);
  return run.run();
}

OAResult solve_exact(const WeightedGraph& g, OAConfig cfg) {
  const double cap = initial_upper_bound(g);
  if (!(cap > 1e-12)) throw OAError("graph is disconnected; no spanning tree exists");
  cfg.sizes = {g.node_count()};
  const DesignModel dm = base_relaxed_model(g, g.node_count() - 1, cap);
  return run_algorithm1(g, dm, cfg);
}

KelleyResult kelley_relaxation(const WeightedGraph& g, double tol, int max_iterations) {
  if (!(tol > 0.0)) throw OAError("kelley tolerance must be positive");
  const double cap = initial_upper_bound(g);
  if (!(cap > 1e-12)) throw OAError("graph is disconnected; no spanning tree exists");
  DesignModel dm = base_relaxed_model(g, g.node_count() - 1, cap);
  add_tree_rows(dm, g);
  for (int v : dm.x_map) dm.model.set_integer(v, false);

  KelleyResult out;
  double last_min = -std::numeric_limits<double>::infinity();
  milp::LazyOracle oracle;
  oracle.integral = [&](const milp::Candidate& c) {
    milp::SeparationResult r;
    const auto eig = sym_eigen(dm.w_matrix(c.values));
    last_min = eig.values.front();
    if (out.iterations >= max_iterations) return r;
    ++out.iterations;
    SubmatrixIndex all;
    for (int i = 1; i <= dm.n; ++i) all.indices.push_back(i);
    for (std::size_t k = 0; k < eig.values.size() && k < 4; ++k) {
      if (eig.values[k] >= -tol) break;
      r.cuts.push_back(eigenvector_cut(dm, all, eig.vector(k)));
    }
    return r;
  };
  const auto sol = milp::solve_milp(dm.model, oracle);
  if (sol.status != milp::Status::optimal) throw OAError("kelley relaxation LP did not solve: " + milp::to_string(sol.status));
  out.value = sol.objective;
  out.converged = last_min >= -std::max(tol, 1e-6);
  return out;
}

double kelley_relaxation_bound(const WeightedGraph& g, double tol) { return kelley_relaxation(g, tol).value; }

void write_trace_csv(std::ostream& os, const OAResult& r, const std::vector<int>& sizes) {
  os << "iteration,gamma_u,lower_bound";
  for (int m : sizes) os << ",cuts_m" << m;
  os << ",soc_cuts,topology_cuts,wall_time\n";
  os.precision(12);
  for (const auto& t : r.trace) {
    os << t.iteration << ',' << t.gamma_u << ',' << t.lower_bound;
    for (int m : sizes) {
      const auto it = t.cuts_by_size.find(m);
      os << ',' << (it == t.cuts_by_size.end() ? 0 : it->second);
    }
    os << ',' << t.soc_cuts << ',' << t.topology_cuts << ',' << t.wall_time << '\n';
  }
}

}  // namespace acnet
