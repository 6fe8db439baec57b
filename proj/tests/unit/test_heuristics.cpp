#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "acnet/heuristics.hpp"
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

WeightedGraph four_node() {
  return WeightedGraph(4, {{1, 2, 4.0}, {1, 3, 3.0}, {1, 4, 2.0}, {2, 3, 1.0}, {2, 4, 1.0}, {3, 4, 1.0}});
}

double lambda2(const WeightedGraph& g, const EdgeSelection& x) {
  return algebraic_connectivity(weighted_laplacian(g, x)).lambda2;
}

int max_degree(const WeightedGraph& g, const EdgeSelection& x) {
  const auto d = degrees(g, x);
  return *std::max_element(d.begin(), d.end());
}

HeuristicParams dclbf(int k, int h1, int h2) { return {DegreeMode::dclbf, k, h1, h2}; }
HeuristicParams capped(int d, int h1, int h2) { return {DegreeMode::capped, d, h1, h2}; }

double dclbf_optimum(const WeightedGraph& g, int k) {
  OAConfig cfg;
  cfg.sizes = {g.node_count()};
  return run_algorithm1(g, dclbf_model(g, k, initial_upper_bound(g)), cfg).lower_bound;
}

}  // namespace

TEST_CASE("ranking on the four-node example") {
  const auto o = ranking(four_node(), 2, 4);
  CHECK(o.center_score == std::vector<double>{7, 5, 4, 3});
  CHECK(o.center_order == std::vector<NodeId>{1, 2, 3, 4});
  CHECK(o.neighbor_order[0] == std::vector<NodeId>{2, 3, 4});
  CHECK(o.leaves(1) == std::vector<NodeId>{4});
  CHECK_THROWS_AS(ranking(four_node(), 0, 2), HeuristicError);
  CHECK_THROWS_AS(ranking(four_node(), 4, 2), HeuristicError);
  CHECK_THROWS_AS(ranking(four_node(), 2, 5), HeuristicError);
}

TEST_CASE("uniform weights rank by index") {
  for (int n = 3; n <= 8; ++n) {
    const auto o = ranking(WeightedGraph::complete(n), n - 2, n);
    std::vector<NodeId> expect(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) expect[static_cast<std::size_t>(i)] = i + 1;
    CHECK(o.center_order == expect);
  }
}

TEST_CASE("leaf rankings are permutations of the non-center nodes") {
  const auto g = seeded_complete(8, 3);
  for (int slots = 1; slots <= 7; ++slots) {
    const auto o = ranking(g, slots, 4);
    for (int c = 0; c < 4; ++c) {
      const NodeId center = o.center_order[static_cast<std::size_t>(c)];
      CHECK(static_cast<int>(o.leaves(center).size()) == 7 - slots);
      for (NodeId u : o.leaves(center)) {
        auto row = o.leaf_edge_order[static_cast<std::size_t>(center - 1)][static_cast<std::size_t>(u - 1)];
        std::sort(row.begin(), row.end());
        std::vector<NodeId> expect;
        for (NodeId l = 1; l <= 8; ++l)
          if (l != center) expect.push_back(l);
        CHECK(row == expect);
      }
    }
  }
}

TEST_CASE("attachment scores follow the star's Fiedler vector") {
  const auto g = seeded_complete(6, 4);
  const auto o = ranking(g, 3, 1);
  const NodeId c = o.center_order[0];
  EdgeSelection star(g.edge_count());
  for (NodeId j = 1; j <= 6; ++j)
    if (j != c) star.set(static_cast<std::size_t>(g.edge_index(c, j)));
  const auto v = algebraic_connectivity(weighted_laplacian(g, star)).fiedler;
  for (NodeId u : o.leaves(c)) {
    const auto& row = o.leaf_edge_order[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(u - 1)];
    auto score = [&](NodeId l) {
      if (l == u) return 0.0;
      const double d = v[static_cast<std::size_t>(u - 1)] - v[static_cast<std::size_t>(l - 1)];
      return g.weight(u, l) * d * d;
    };
    for (std::size_t i = 1; i < row.size(); ++i) CHECK(score(row[i - 1]) >= score(row[i]) - 1e-12);
  }
}

TEST_CASE("baselines") {
  const auto g = four_node();
  const auto mst = max_weight_spanning_tree(g);
  CHECK(mst.tree == EdgeSelection::from_pairs(g, {{1, 2}, {1, 3}, {1, 4}}));
  CHECK(tree_weight(g, mst.tree) == 9.0);
  CHECK(mst.gamma_h == doctest::Approx(lambda2(g, mst.tree)).epsilon(1e-12));

  double best = 0.0;
  for (NodeId h = 1; h <= 4; ++h) {
    EdgeSelection s(g.edge_count());
    for (NodeId j = 1; j <= 4; ++j)
      if (j != h) s.set(static_cast<std::size_t>(g.edge_index(h, j)));
    best = std::max(best, lambda2(g, s));
  }
  CHECK(best_star(g).gamma_h == doctest::Approx(best).epsilon(1e-12));
  CHECK(best_star(WeightedGraph::complete(4)).gamma_h == doctest::Approx(1.0).epsilon(1e-12));

  const auto k5 = WeightedGraph::complete(5);
  CHECK(tree_weight(k5, max_weight_spanning_tree(k5).tree) == 4.0);
  const auto light = min_weight_spanning_tree(g);
  CHECK(is_spanning_tree(g, light.tree));
  CHECK(tree_weight(g, light.tree) == 4.0);

  CHECK_THROWS_AS(max_weight_spanning_tree(WeightedGraph(4, {{1, 2, 1.0}, {3, 4, 1.0}})), HeuristicError);
  CHECK_THROWS_AS(best_star(WeightedGraph(4, {{1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}})), HeuristicError);

  std::mt19937_64 rng(9);
  for (int t = 0; t < 5; ++t) {
    const auto h = seeded_complete(6, static_cast<unsigned>(rng()));
    CHECK(is_spanning_tree(h, max_weight_spanning_tree(h).tree));
    CHECK(best_star(h).gamma_h <= solve_exact(h).lower_bound + 1e-9);
  }
}

TEST_CASE("MCH with a vacuous restriction is the DCLBF optimum") {
  const auto g = seeded_complete(6, 12);
  for (int k = 1; k <= 5; ++k) {
    const auto r = mch(g, dclbf(k, 6, 5));
    CAPTURE(k);
    CHECK(r.gamma_h == doctest::Approx(dclbf_optimum(g, k)).epsilon(1e-6));
    CHECK(is_spanning_tree(g, r.tree));
    CHECK(r.gamma_h == doctest::Approx(lambda2(g, r.tree)).epsilon(1e-8));
    CHECK(max_degree(g, r.tree) >= 6 - k);
  }
}

TEST_CASE("MCH on a seeded K7 stays below the DCLBF optimum") {
  const auto g = seeded_complete(7, 13);
  const double full = dclbf_optimum(g, 3);
  const auto r = mch(g, dclbf(3, 3, 3));
  CHECK(r.gamma_h <= full + 1e-6);
  CHECK(max_degree(g, r.tree) >= 4);
  CHECK(r.candidates.size() == 3);
  const auto o = ranking(g, 4, 3);
  for (int c = 0; c < 3; ++c) {
    const NodeId hub = o.center_order[static_cast<std::size_t>(c)];
    EdgeSelection star(g.edge_count());
    for (NodeId j = 1; j <= 7; ++j)
      if (j != hub) star.set(static_cast<std::size_t>(g.edge_index(hub, j)));
    CHECK(r.gamma_h >= lambda2(g, star) - 1e-9);
    CHECK(r.candidates[static_cast<std::size_t>(c)].center == hub);
  }
  CHECK(full <= solve_exact(g).lower_bound + 1e-6);
}

TEST_CASE("MCH is monotone in h1 and h2") {
  const auto g = seeded_complete(7, 14);
  double prev = 0.0;
  for (int h1 = 1; h1 <= 7; h1 += 2) {
    const double v = mch(g, dclbf(3, h1, 3)).gamma_h;
    CHECK(v >= prev - 1e-6);
    prev = v;
  }
  prev = 0.0;
  for (int h2 = 1; h2 <= 6; ++h2) {
    const double v = mch(g, dclbf(3, 3, h2)).gamma_h;
    CHECK(v >= prev - 1e-6);
    prev = v;
  }
}

TEST_CASE("degree-capped MCH") {
  const auto k4 = WeightedGraph::complete(4);
  const auto path = mch_degree_capped(k4, capped(2, 4, 3));
  CHECK(path.gamma_h == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-9));
  CHECK(max_degree(k4, path.tree) <= 2);

  const auto g = seeded_complete(6, 15);
  CHECK(mch_degree_capped(g, capped(5, 6, 5)).gamma_h == doctest::Approx(solve_exact(g).lower_bound).epsilon(1e-6));
  for (int d = 2; d <= 4; ++d) {
    const auto r = mch_degree_capped(g, capped(d, 3, 3));
    CAPTURE(d);
    CHECK(max_degree(g, r.tree) <= d);
    CHECK(is_spanning_tree(g, r.tree));
  }
  CHECK_THROWS_AS(mch_degree_capped(g, capped(1, 3, 3)), HeuristicError);
  CHECK_THROWS_AS(mch_degree_capped(g, dclbf(3, 3, 3)), HeuristicError);
  CHECK_THROWS_AS(mch(g, capped(3, 3, 3)), HeuristicError);
}

TEST_CASE("MCH parameter errors") {
  const auto g = seeded_complete(6, 16);
  CHECK_THROWS_AS(mch(g, dclbf(0, 3, 3)), HeuristicError);
  CHECK_THROWS_AS(mch(g, dclbf(6, 3, 3)), HeuristicError);
  CHECK_THROWS_AS(mch(g, dclbf(3, 0, 3)), HeuristicError);
  CHECK_THROWS_AS(mch(g, dclbf(3, 7, 3)), HeuristicError);
  CHECK_THROWS_AS(mch(g, dclbf(3, 3, 0)), HeuristicError);
  CHECK_THROWS_AS(mch(g, dclbf(3, 3, 6)), HeuristicError);
}

TEST_CASE("MCH is deterministic and writes a candidate table") {
  const auto g = seeded_complete(7, 17);
  const auto a = mch(g, dclbf(3, 4, 3));
  const auto b = mch(g, dclbf(3, 4, 3));
  CHECK(a.tree == b.tree);
  CHECK(a.gamma_h == b.gamma_h);
  REQUIRE(a.candidates.size() == b.candidates.size());
  for (std::size_t i = 0; i < a.candidates.size(); ++i) {
    CHECK(a.candidates[i].center == b.candidates[i].center);
    CHECK(a.candidates[i].found == b.candidates[i].found);
    CHECK(a.candidates[i].gamma_h == b.candidates[i].gamma_h);
  }

  std::ostringstream os;
  write_candidates_csv(os, a);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "center,found,gamma_h,status,wall_time");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 4);
}
