#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "acnet/oa_solver.hpp"
#include "doctest.h"

using namespace acnet;

namespace {

WeightedGraph seeded_complete(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(1.0, 10.0);
  SymMatrix w(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j) w(i, j) = w(j, i) = u(rng);
  return WeightedGraph::complete_from(w);
}

double lambda2(const WeightedGraph& g, const EdgeSelection& x) {
  return algebraic_connectivity(weighted_laplacian(g, x)).lambda2;
}

double brute_force(const WeightedGraph& g) {
  double best = -1.0;
  enumerate_spanning_trees(g, [&](const EdgeSelection& x) {
    best = std::max(best, lambda2(g, x));
    return true;
  });
  return best;
}

EdgeSelection random_tree(const WeightedGraph& g, std::mt19937_64& rng) {
  const int n = g.node_count();
  std::vector<NodeId> code(static_cast<std::size_t>(n - 2));
  for (auto& c : code) c = 1 + static_cast<NodeId>(rng() % static_cast<unsigned>(n));
  EdgeSelection x(g.edge_count());
  for (auto [a, b] : prufer_decode(n, code)) x.set(static_cast<std::size_t>(g.edge_index(a, b)));
  return x;
}

OAConfig sizes(std::vector<int> m) {
  OAConfig c;
  c.sizes = std::move(m);
  return c;
}

/// A model point whose W block is `w` and everything else 0.
std::vector<double> with_w(const DesignModel& dm, const SymMatrix& w) {
  std::vector<double> p(static_cast<std::size_t>(dm.model.variable_count()), 0.0);
  for (NodeId i = 1; i <= dm.n; ++i)
    for (NodeId j = i; j <= dm.n; ++j)
      p[static_cast<std::size_t>(dm.w_var(i, j))] = w(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1));
  return p;
}

}  // namespace

TEST_CASE("initial upper bound") {
  CHECK(initial_upper_bound(WeightedGraph::complete(4)) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(initial_upper_bound(WeightedGraph::complete(3)) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(initial_upper_bound(WeightedGraph(4, {{1, 2, 1.0}, {3, 4, 1.0}})) == doctest::Approx(0.0));

  std::mt19937_64 rng(5);
  const auto g = seeded_complete(7, 5);
  const double ub = initial_upper_bound(g);
  for (int t = 0; t < 100; ++t) CHECK(lambda2(g, random_tree(g, rng)) <= ub + 1e-9);
}

TEST_CASE("eigenvector cut expansion") {
  const auto g = WeightedGraph::complete(3);
  const auto dm = base_relaxed_model(g, 2, 3.0);
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<double> v{s, -s};
  const auto cut = eigenvector_cut(dm, SubmatrixIndex{{1, 2}}, v);
  CHECK(cut.sense == milp::RowSense::ge);
  CHECK(cut.rhs == 0.0);
  CHECK(cut.tag == "eigen:2");
  SymMatrix w(3);
  w(0, 0) = w(1, 1) = 1.0;
  w(0, 1) = w(1, 0) = 2.0;
  // Unit v gives half of W_11 − 2W_12 + W_22 ≥ 0.
  REQUIRE(cut.terms.size() == 3);
  for (const auto& t : cut.terms) {
    const double expect = t.var == dm.w_var(1, 2) ? -2.0 : 1.0;
    CHECK(2.0 * t.coef == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(2.0 * cut.slack(with_w(dm, w)) == doctest::Approx(-2.0).epsilon(1e-12));

  const std::vector<double> one{1.0};
  const auto diag = eigenvector_cut(dm, SubmatrixIndex{{1}}, one);
  REQUIRE(diag.terms.size() == 1);
  CHECK(diag.terms[0].var == dm.w_var(1, 1));
  CHECK(diag.terms[0].coef == 1.0);

  CHECK_THROWS_AS(eigenvector_cut(dm, SubmatrixIndex{{1, 2}}, one), OAError);
  CHECK_THROWS_AS(eigenvector_cut(dm, SubmatrixIndex{{1, 4}}, v), OAError);
}

TEST_CASE("SOC tangent cuts") {
  const auto g = WeightedGraph::complete(3);
  const auto dm = base_relaxed_model(g, 2, 3.0);
  SymMatrix w(3);
  w(0, 0) = w(1, 1) = 1.0;
  w(0, 1) = w(1, 0) = 2.0;
  const auto cuts = soc_oa_cuts(dm, w, {{1, 2}});
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].tag == "soc");
  CHECK(cuts[0].slack(with_w(dm, w)) == doctest::Approx(-3.0).epsilon(1e-12));

  SymMatrix diag(3);
  diag(0, 0) = 1.0;
  const auto flat = soc_oa_cuts(dm, diag, {{1, 2}});
  REQUIRE(flat.size() == 1);
  REQUIRE(flat[0].terms.size() == 1);
  CHECK(flat[0].terms[0].var == dm.w_var(2, 2));

  CHECK_THROWS_AS(soc_oa_cuts(dm, SymMatrix(3), {{1, 2}}), OAError);
  CHECK_THROWS_AS(soc_oa_cuts(dm, w, {{1, 1}}), OAError);
}

TEST_CASE("SOC cuts hold on the 2x2 PSD cone") {
  const auto g = WeightedGraph::complete(2);
  const auto dm = base_relaxed_model(g, 1, 2.0);
  std::vector<SymMatrix> anchors;
  for (double a : {0.3, 1.0, 4.0})
    for (double b : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
      SymMatrix s(2);
      s(0, 0) = a;
      s(0, 1) = s(1, 0) = b;
      anchors.push_back(s);
    }
  for (const auto& anchor : anchors) {
    const auto cut = soc_oa_cuts(dm, anchor, {{1, 2}}).front();
    for (double wii = 0.05; wii <= 5.0; wii += 0.35)
      for (double wjj = 0.0; wjj <= 5.0; wjj += 0.35)
        for (double t = -1.0; t <= 1.0; t += 0.1) {
          SymMatrix p(2);
          p(0, 0) = wii;
          p(1, 1) = wjj;
          p(0, 1) = p(1, 0) = t * std::sqrt(wii * wjj);
          CHECK(cut.slack(with_w(dm, p)) >= -1e-9);
        }
  }
}

TEST_CASE("exact solves on unit complete graphs") {
  for (int n : {4, 5}) {
    const auto g = WeightedGraph::complete(n);
    const auto r = solve_exact(g);
    CAPTURE(n);
    CHECK(r.status == OAStatus::optimal);
    CHECK(r.lower_bound == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.upper_bound >= r.lower_bound - 1e-6);
    const auto deg = degrees(g, r.tree);
    CHECK(*std::max_element(deg.begin(), deg.end()) == n - 1);
  }
}

TEST_CASE("exact solves match brute force") {
  for (int n = 4; n <= 7; ++n)
    for (unsigned seed : {1u, 2u}) {
      const auto g = seeded_complete(n, seed * 100 + static_cast<unsigned>(n));
      const auto r = solve_exact(g);
      CAPTURE(n);
      CAPTURE(seed);
      CHECK(r.status == OAStatus::optimal);
      CHECK(is_spanning_tree(g, r.tree));
      CHECK(r.lower_bound == doctest::Approx(lambda2(g, r.tree)).epsilon(1e-10));
      CHECK(r.lower_bound == doctest::Approx(brute_force(g)).epsilon(1e-6));
      CHECK((r.upper_bound - r.lower_bound) / (r.upper_bound + 1e-6) <= 1e-4);
    }
}

TEST_CASE("upper-bound hierarchy and monotone history") {
  const auto g = seeded_complete(5, 21);
  const double opt = brute_force(g);
  const auto r2 = run_algorithm1(g, base_relaxed_model(g, 4, initial_upper_bound(g)), sizes({2}));
  const auto r3 = run_algorithm1(g, base_relaxed_model(g, 4, initial_upper_bound(g)), sizes({3}));
  CHECK(r2.status == OAStatus::bound);
  CHECK(r2.upper_bound >= r3.upper_bound - 1e-6);
  CHECK(r3.upper_bound >= opt - 1e-6);
  CHECK(r2.lower_bound <= r2.upper_bound + 1e-6);

  for (OAMode mode : {OAMode::lazy, OAMode::outer}) {
    auto cfg = sizes({3});
    cfg.mode = mode;
    const auto r = run_algorithm1(g, base_relaxed_model(g, 4, initial_upper_bound(g)), cfg);
    REQUIRE_FALSE(r.upper_bound_history.empty());
    for (std::size_t i = 1; i < r.upper_bound_history.size(); ++i)
      CHECK(r.upper_bound_history[i] <= r.upper_bound_history[i - 1] + 1e-9);
    CHECK(r.upper_bound == doctest::Approx(r3.upper_bound).epsilon(1e-6));
  }
}

TEST_CASE("SOC mode leaves the 2x2 bound unchanged") {
  for (unsigned seed : {31u, 32u, 33u}) {
    const auto g = seeded_complete(6, seed);
    auto off = sizes({2});
    auto on = off;
    on.soc_mode = true;
    const auto a = run_algorithm1(g, base_relaxed_model(g, 5, initial_upper_bound(g)), off);
    const auto b = run_algorithm1(g, base_relaxed_model(g, 5, initial_upper_bound(g)), on);
    CAPTURE(seed);
    CHECK(b.soc_cut_count > 0);
    CHECK(std::abs(a.upper_bound - b.upper_bound) <= 1e-6);
  }
}

TEST_CASE("recorded eigenvector cuts hold for random trees") {
  const auto g = seeded_complete(6, 41);
  auto cfg = sizes({2, 3, 6});
  cfg.record_cuts = true;
  cfg.soc_mode = true;
  const auto dm = base_relaxed_model(g, 5, initial_upper_bound(g));
  const auto r = run_algorithm1(g, dm, cfg);
  REQUIRE_FALSE(r.recorded_cuts.empty());
  std::mt19937_64 rng(42);
  for (int t = 0; t < 200; ++t) {
    const auto x = random_tree(g, rng);
    const auto p = dm.point(g, x, lambda2(g, x));
    for (const auto& c : r.recorded_cuts) CHECK(c.slack(p) >= -1e-8);
  }
}

TEST_CASE("subset cuts only in exact runs") {
  const auto g = seeded_complete(6, 51);
  const auto bound = run_algorithm1(g, base_relaxed_model(g, 5, initial_upper_bound(g)), sizes({2, 3}));
  CHECK(bound.subset_cut_count == 0);
  auto cfg = sizes({6});
  cfg.subset_cuts_per_round = 0;
  const auto plain = solve_exact(g, cfg);
  CHECK(plain.subset_cut_count == 0);
  CHECK(plain.lower_bound == doctest::Approx(solve_exact(g).lower_bound).epsilon(1e-6));
}

TEST_CASE("cutoff status") {
  const auto g = seeded_complete(6, 61);
  const double opt = brute_force(g);
  auto cfg = sizes({6});
  cfg.milp_limits.cutoff = opt + 0.1;
  CHECK(solve_exact(g, cfg).status == OAStatus::cutoff);
  cfg.milp_limits.cutoff = opt - 0.1;
  const auto r = solve_exact(g, cfg);
  CHECK(r.status == OAStatus::optimal);
  CHECK(r.lower_bound == doctest::Approx(opt).epsilon(1e-6));
}

TEST_CASE("Kelley relaxation bound") {
  CHECK(kelley_relaxation_bound(WeightedGraph::complete(4), 1e-6) >= 2.0 - 1e-6);
  CHECK_THROWS_AS(kelley_relaxation_bound(WeightedGraph::complete(4), 0.0), OAError);
  for (int n = 5; n <= 7; ++n) {
    const auto g = seeded_complete(n, 70 + static_cast<unsigned>(n));
    const double tol = 1e-6;
    const auto k = kelley_relaxation(g, tol);
    CAPTURE(n);
    CHECK(k.converged);
    CHECK(k.value >= solve_exact(g).lower_bound - 1e-6);
    CHECK(k.value <= initial_upper_bound(g) + tol * n);
  }
  auto cfg = sizes({5});
  cfg.kelley_initial_bound = true;
  const auto g = seeded_complete(5, 75);
  CHECK(solve_exact(g, cfg).lower_bound == doctest::Approx(brute_force(g)).epsilon(1e-6));
}

TEST_CASE("configuration errors and trace output") {
  const auto g = WeightedGraph::complete(4);
  const auto dm = base_relaxed_model(g, 3, 4.0);
  CHECK_THROWS_AS(run_algorithm1(g, dm, sizes({0})), OAError);
  CHECK_THROWS_AS(run_algorithm1(g, dm, sizes({5})), OAError);
  auto bad = sizes({4});
  bad.eps_opt = 0.0;
  CHECK_THROWS_AS(run_algorithm1(g, dm, bad), OAError);
  CHECK_THROWS_AS(run_algorithm1(WeightedGraph::complete(5), dm, sizes({4})), OAError);
  CHECK_THROWS_AS(solve_exact(WeightedGraph(4, {{1, 2, 1.0}, {3, 4, 1.0}})), OAError);

  const auto r = solve_exact(g);
  std::ostringstream os;
  write_trace_csv(os, r, {4});
  CHECK(os.str().rfind("iteration,gamma_u,lower_bound", 0) == 0);
  CHECK(to_string(OAStatus::cutoff) == "cutoff");
}
