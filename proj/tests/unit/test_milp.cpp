#include <cmath>
#include <random>

#include "acnet/milp.hpp"
#include "doctest.h"

using namespace acnet::milp;

namespace {

LinearConstraint row(std::vector<Term> t, RowSense s, double rhs) { return {std::move(t), s, rhs, {}}; }

/// Exhaustive optimum of a pure binary model; nullopt when infeasible.
std::optional<double> brute_force(const Model& m) {
  const int n = m.variable_count();
  std::optional<double> best;
  std::vector<double> x(static_cast<std::size_t>(n));
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = (mask >> j) & 1u;
    if (m.max_violation(x) > 1e-9) continue;
    const double z = m.objective_value(x);
    if (!best || (m.objective_sense() == ObjSense::maximize ? z > *best : z < *best)) best = z;
  }
  return best;
}

Model random_binary_model(std::mt19937_64& rng, int n, int rows) {
  std::uniform_int_distribution<int> coef(-5, 9);
  std::uniform_int_distribution<int> sense(0, 2);
  Model m;
  for (int j = 0; j < n; ++j) m.add_binary();
  std::vector<Term> obj;
  for (int j = 0; j < n; ++j) obj.push_back({j, static_cast<double>(coef(rng))});
  m.set_objective(obj, rng() % 2 ? ObjSense::maximize : ObjSense::minimize);
  for (int r = 0; r < rows; ++r) {
    std::vector<Term> t;
    double sum = 0.0;
    for (int j = 0; j < n; ++j)
      if (rng() % 2) {
        const double c = coef(rng);
        t.push_back({j, c});
        sum += std::abs(c);
      }
    const int s = sense(rng);
    const double rhs = std::floor(sum * 0.4);
    m.add_constraint(row(t, s == 0 ? RowSense::le : s == 1 ? RowSense::ge : RowSense::eq, s == 2 ? std::floor(sum * 0.2) : rhs));
  }
  return m;
}

}  // namespace

TEST_CASE("single bounded variable") {
  Model m;
  const int x = m.add_variable(0.0, kInf, false, "x");
  m.add_constraint(row({{x, 1.0}}, RowSense::le, 5.0));
  m.set_objective({{x, 1.0}}, ObjSense::maximize);
  const auto lp = solve_lp(m);
  REQUIRE(lp.status == Status::optimal);
  CHECK(lp.objective == doctest::Approx(5.0));
  const auto mip = solve_milp(m);
  CHECK(mip.status == Status::optimal);
  CHECK(mip.objective == doctest::Approx(5.0));
}

TEST_CASE("contradictory rows are infeasible") {
  Model m;
  const int x = m.add_variable(-kInf, kInf, false);
  m.add_constraint(row({{x, 1.0}}, RowSense::ge, 1.0));
  m.add_constraint(row({{x, 1.0}}, RowSense::le, 0.0));
  m.set_objective({{x, 1.0}}, ObjSense::minimize);
  CHECK(solve_lp(m).status == Status::infeasible);
  CHECK(solve_milp(m).status == Status::infeasible);
}

TEST_CASE("unbounded LP") {
  Model m;
  const int x = m.add_variable(0.0, kInf, false);
  m.set_objective({{x, 1.0}}, ObjSense::maximize);
  CHECK(solve_lp(m).status == Status::unbounded);
}

TEST_CASE("knapsack and a lazy cut") {
  Model m;
  const int a = m.add_binary("a");
  const int b = m.add_binary("b");
  m.add_constraint(row({{a, 2.0}, {b, 2.0}}, RowSense::le, 3.0));
  m.set_objective({{a, 3.0}, {b, 2.0}}, ObjSense::maximize);
  const auto plain = solve_milp(m);
  REQUIRE(plain.status == Status::optimal);
  CHECK(plain.objective == doctest::Approx(3.0));
  CHECK(plain.dual_bound == doctest::Approx(3.0).epsilon(1e-6));

  int calls = 0;
  LazyOracle oracle;
  oracle.integral = [&](const Candidate& c) {
    ++calls;
    SeparationResult r;
    // a + (1 - b) <= 1
    if (c.values[0] + (1.0 - c.values[1]) > 1.0 + 1e-9)
      r.cuts.push_back(row({{a, 1.0}, {b, -1.0}}, RowSense::le, 0.0));
    return r;
  };
  const auto cut = solve_milp(m, oracle);
  REQUIRE(cut.status == Status::optimal);
  CHECK(cut.objective == doctest::Approx(2.0));
  CHECK(cut.values[1] == doctest::Approx(1.0));
  CHECK(calls >= 1);
  CHECK(cut.cut_count >= 1);
}

TEST_CASE("bad variable index is rejected") {
  Model m;
  m.add_binary();
  CHECK_THROWS_AS(m.add_constraint(row({{3, 1.0}}, RowSense::le, 1.0)), ModelError);
  CHECK_THROWS_AS(m.add_variable(1.0, 0.0, false), ModelError);
}

TEST_CASE("random binary programs match enumeration") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 11);
    const int rows = 1 + static_cast<int>(rng() % 5);
    const Model m = random_binary_model(rng, n, rows);
    const auto expect = brute_force(m);
    const auto got = solve_milp(m);
    CAPTURE(trial);
    CAPTURE(to_lp_format(m));
    if (!expect) {
      CHECK(got.status == Status::infeasible);
      continue;
    }
    REQUIRE(got.status == Status::optimal);
    CHECK(got.objective == doctest::Approx(*expect).epsilon(1e-9));
    CHECK(m.max_violation(got.values) <= 1e-6);
    for (std::size_t k = 1; k < got.bound_history.size(); ++k) {
      if (m.objective_sense() == ObjSense::maximize) CHECK(got.bound_history[k] <= got.bound_history[k - 1] + 1e-12);
      else CHECK(got.bound_history[k] >= got.bound_history[k - 1] - 1e-12);
    }
  }
}

TEST_CASE("mixed integer with continuous columns") {
  // max x + y, x integer in [0,10], y continuous, 2x + 3y <= 12, x - y <= 2.5
  Model m;
  const int x = m.add_variable(0.0, 10.0, true, "x");
  const int y = m.add_variable(0.0, kInf, false, "y");
  m.add_constraint(row({{x, 2.0}, {y, 3.0}}, RowSense::le, 12.0));
  m.add_constraint(row({{x, 1.0}, {y, -1.0}}, RowSense::le, 2.5));
  m.set_objective({{x, 1.0}, {y, 1.0}}, ObjSense::maximize);
  const auto s = solve_milp(m);
  REQUIRE(s.status == Status::optimal);
  // LP optimum is x=3.9; x=4 needs y in [1.5, 4/3] which is empty, so x=3, y=2
  CHECK(s.objective == doctest::Approx(5.0));
  CHECK(solve_lp(m).objective == doctest::Approx(5.3));
}

TEST_CASE("MIP start and heuristic adoption") {
  Model m;
  for (int j = 0; j < 4; ++j) m.add_binary();
  m.add_constraint(row({{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}}, RowSense::le, 2.0));
  m.set_objective({{0, 1.0}, {1, 2.0}, {2, 3.0}, {3, 4.0}}, ObjSense::maximize);
  std::vector<double> start{0, 0, 1, 1};
  const auto s = solve_milp(m, {}, {}, &start);
  REQUIRE(s.status == Status::optimal);
  CHECK(s.objective == doctest::Approx(7.0));
}

TEST_CASE("node limit reports limit status with a valid bound") {
  std::mt19937_64 rng(7);
  const Model m = random_binary_model(rng, 12, 4);
  Limits lim;
  lim.max_nodes = 1;
  const auto s = solve_milp(m, {}, lim);
  CHECK((s.status == Status::limit || s.status == Status::optimal || s.status == Status::infeasible));
  if (const auto e = brute_force(m); e && s.status == Status::limit) {
    if (m.objective_sense() == ObjSense::maximize) CHECK(s.dual_bound >= *e - 1e-9);
    else CHECK(s.dual_bound <= *e + 1e-9);
  }
}

TEST_CASE("lp text dump names every row") {
  Model m;
  const int x = m.add_binary("x");
  m.add_constraint(row({{x, 1.0}}, RowSense::le, 1.0));
  const auto text = to_lp_format(m);
  CHECK(text.find("c0:") != std::string::npos);
  CHECK(text.find("Generals") != std::string::npos);
}

TEST_CASE("pseudocost branching reaches the same optimum") {
  std::mt19937_64 rng(99);
  Limits lim;
  lim.branching = Branching::pseudocost;
  for (int trial = 0; trial < 150; ++trial) {
    const Model m = random_binary_model(rng, 4 + static_cast<int>(rng() % 9), 1 + static_cast<int>(rng() % 4));
    const auto expect = brute_force(m);
    const auto got = solve_milp(m, {}, lim);
    CAPTURE(trial);
    if (!expect) {
      CHECK(got.status == Status::infeasible);
      continue;
    }
    REQUIRE(got.status == Status::optimal);
    CHECK(got.objective == doctest::Approx(*expect).epsilon(1e-9));
  }
}

TEST_CASE("cutoff prunes without losing the bound") {
  std::mt19937_64 rng(5150);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 60; ++trial) {
    const Model m = random_binary_model(rng, 6 + static_cast<int>(rng() % 6), 2);
    const auto expect = brute_force(m);
    if (!expect) continue;
    ++checked;
    const bool max = m.objective_sense() == ObjSense::maximize;
    CAPTURE(trial);

    Limits below;  // optimum beats the cutoff: still found
    below.cutoff = max ? *expect - 0.5 : *expect + 0.5;
    const auto a = solve_milp(m, {}, below);
    REQUIRE(a.has_incumbent);
    CHECK(a.objective == doctest::Approx(*expect));

    Limits above;  // nothing beats the cutoff: no incumbent, bound still valid
    above.cutoff = max ? *expect + 0.5 : *expect - 0.5;
    const auto b = solve_milp(m, {}, above);
    CHECK_FALSE(b.has_incumbent);
    if (max) CHECK(b.dual_bound >= *expect - 1e-9);
    else CHECK(b.dual_bound <= *expect + 1e-9);
  }
  CHECK(checked >= 30);
}

TEST_CASE("columns defined by a single equality are solved exactly") {
  // Each y_k appears in one equality y_k = Σ a x + c with bounds, plus the objective.
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<int> coef(-4, 6);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 7);
    Model m = random_binary_model(rng, n, 1);
    std::vector<Term> obj = m.objective();
    const int aux = 1 + static_cast<int>(rng() % 3);
    struct Def {
      std::vector<double> a;
      double c, lo, hi;
    };
    std::vector<Def> defs;
    for (int k = 0; k < aux; ++k) {
      Def d{std::vector<double>(static_cast<std::size_t>(n)), static_cast<double>(coef(rng)), 0, 0};
      double lo = d.c, hi = d.c;
      for (int j = 0; j < n; ++j) {
        d.a[static_cast<std::size_t>(j)] = coef(rng);
        lo += std::min(0.0, d.a[static_cast<std::size_t>(j)]);
        hi += std::max(0.0, d.a[static_cast<std::size_t>(j)]);
      }
      // Sometimes tighter than implied, so the bound must survive elimination.
      d.lo = rng() % 2 ? lo : lo + 0.4 * (hi - lo);
      d.hi = rng() % 2 ? hi : hi - 0.3 * (hi - lo);
      const int y = m.add_variable(d.lo, d.hi, false);
      std::vector<Term> t{{y, 1.0}};
      for (int j = 0; j < n; ++j) t.push_back({j, -d.a[static_cast<std::size_t>(j)]});
      m.add_constraint(row(t, RowSense::eq, d.c));
      obj.push_back({y, static_cast<double>(coef(rng))});
      defs.push_back(d);
    }
    m.set_objective(obj, m.objective_sense());

    std::optional<double> best;
    std::vector<double> x(static_cast<std::size_t>(m.variable_count()));
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = (mask >> j) & 1u;
      for (int k = 0; k < aux; ++k) {
        double v = defs[static_cast<std::size_t>(k)].c;
        for (int j = 0; j < n; ++j) v += defs[static_cast<std::size_t>(k)].a[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(n + k)] = v;
      }
      if (m.max_violation(x) > 1e-9) continue;
      const double z = m.objective_value(x);
      if (!best || (m.objective_sense() == ObjSense::maximize ? z > *best : z < *best)) best = z;
    }
    const auto got = solve_milp(m);
    CAPTURE(trial);
    if (!best) {
      CHECK(got.status == Status::infeasible);
      continue;
    }
    REQUIRE(got.status == Status::optimal);
    CHECK(got.objective == doctest::Approx(*best).epsilon(1e-9));
    CHECK(m.max_violation(got.values) <= 1e-6);
    CHECK(m.objective_value(got.values) == doctest::Approx(got.objective).epsilon(1e-9));
  }
}

TEST_CASE("rows supplied lazily give the full model's optimum") {
  // Hidden rows are returned one at a time by the oracle, so long solves age
  // slack rows out of the LP and must restore them when violated again.
  std::mt19937_64 rng(424242);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 10 + static_cast<int>(rng() % 4);
    const Model full = random_binary_model(rng, n, 10);
    Model visible;
    for (int j = 0; j < n; ++j) visible.add_binary();
    visible.set_objective(full.objective(), full.objective_sense());
    visible.add_constraint(full.constraints()[0]);
    const std::vector<LinearConstraint> hidden(full.constraints().begin() + 1, full.constraints().end());

    LazyOracle oracle;
    oracle.integral = [&](const Candidate& c) {
      SeparationResult r;
      for (const auto& h : hidden)
        if (h.slack(c.values) < -1e-9) {
          r.cuts.push_back(h);
          break;
        }
      return r;
    };
    const auto expect = brute_force(full);
    const auto got = solve_milp(visible, oracle);
    CAPTURE(trial);
    if (!expect) {
      CHECK(got.status == Status::infeasible);
      continue;
    }
    REQUIRE(got.status == Status::optimal);
    CHECK(got.objective == doctest::Approx(*expect).epsilon(1e-9));
    CHECK(full.max_violation(got.values) <= 1e-6);
  }
}

TEST_CASE("Beale's cycling example terminates at the optimum") {
  Model m;
  const int x4 = m.add_variable(0.0, kInf, false);
  const int x5 = m.add_variable(0.0, kInf, false);
  const int x6 = m.add_variable(0.0, kInf, false);
  const int x7 = m.add_variable(0.0, kInf, false);
  m.add_constraint(row({{x4, 0.25}, {x5, -8.0}, {x6, -1.0}, {x7, 9.0}}, RowSense::le, 0.0));
  m.add_constraint(row({{x4, 0.5}, {x5, -12.0}, {x6, -0.5}, {x7, 3.0}}, RowSense::le, 0.0));
  m.add_constraint(row({{x6, 1.0}}, RowSense::le, 1.0));
  m.set_objective({{x4, -0.75}, {x5, 20.0}, {x6, -0.5}, {x7, 6.0}}, ObjSense::minimize);
  const auto s = solve_lp(m);
  REQUIRE(s.status == Status::optimal);
  CHECK(s.objective == doctest::Approx(-1.25));
}

TEST_CASE("many constraints through one vertex") {
  // Every row is tight at the origin; the optimum sits on a degenerate vertex.
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    Model m;
    const int n = 4;
    for (int j = 0; j < n; ++j) m.add_variable(0.0, 1.0, false);
    for (int r = 0; r < 12; ++r) {
      std::vector<Term> t;
      for (int j = 0; j < n; ++j) t.push_back({j, u(rng)});
      m.add_constraint(row(t, RowSense::le, 0.0));
    }
    std::vector<Term> obj;
    for (int j = 0; j < n; ++j) obj.push_back({j, u(rng)});
    m.set_objective(obj, ObjSense::maximize);
    const auto s = solve_lp(m);
    CAPTURE(trial);
    REQUIRE(s.status == Status::optimal);
    CHECK(m.max_violation(s.values) <= 1e-9);
    CHECK(s.objective >= -1e-12);  // the origin is feasible
  }
}

TEST_CASE("lazily added rows hold at the final incumbent") {
  std::mt19937_64 rng(8080);
  for (int trial = 0; trial < 30; ++trial) {
    const Model full = random_binary_model(rng, 9, 6);
    Model visible;
    for (int j = 0; j < 9; ++j) visible.add_binary();
    visible.set_objective(full.objective(), full.objective_sense());
    LazyOracle oracle;
    oracle.integral = [&](const Candidate& c) {
      SeparationResult r;
      for (const auto& h : full.constraints())
        if (h.slack(c.values) < -1e-9) r.cuts.push_back(h);
      return r;
    };
    const auto s = solve_milp(visible, oracle);
    if (s.status != Status::optimal) continue;
    for (const auto& c : s.added_rows) CHECK(c.slack(s.values) >= -1e-6);
    CHECK(s.dual_bound == doctest::Approx(s.objective).epsilon(1e-6));
  }
}
