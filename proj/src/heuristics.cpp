#include "acnet/heuristics.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <ostream>

namespace acnet {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double lambda2_of(const WeightedGraph& g, const EdgeSelection& x) {
  return algebraic_connectivity(weighted_laplacian(g, x)).lambda2;
}

/// Indices 1..n minus `skip`, sorted by descending key with ascending index on ties.
std::vector<NodeId> rank_nodes(int n, NodeId skip, const std::vector<double>& key) {
  std::vector<NodeId> out;
  for (NodeId l = 1; l <= n; ++l)
    if (l != skip) out.push_back(l);
  std::stable_sort(out.begin(), out.end(), [&](NodeId a, NodeId b) {
    return key[static_cast<std::size_t>(a - 1)] > key[static_cast<std::size_t>(b - 1)];
  });
  return out;
}

EdgeSelection star_at(const WeightedGraph& g, NodeId hub) {
  EdgeSelection x(g.edge_count());
  for (NodeId j = 1; j <= g.node_count(); ++j) {
    const int e = j == hub ? -1 : g.edge_index(hub, j);
    if (e >= 0) x.set(static_cast<std::size_t>(e));
  }
  return x;
}

HeuristicResult kruskal(const WeightedGraph& g, bool heaviest_first) {
  const auto t0 = Clock::now();
  std::vector<std::size_t> order(g.edge_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return heaviest_first ? g.edge(a).w > g.edge(b).w : g.edge(a).w < g.edge(b).w;
  });
  std::vector<int> parent(static_cast<std::size_t>(g.node_count() + 1));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
    return a;
  };
  HeuristicResult r;
  r.tree = EdgeSelection(g.edge_count());
  int used = 0;
  for (std::size_t e : order) {
    const int a = find(g.edge(e).i);
    const int b = find(g.edge(e).j);
    if (a == b) continue;
    parent[static_cast<std::size_t>(a)] = b;
    r.tree.set(e);
    ++used;
  }
  if (used != g.node_count() - 1) throw HeuristicError("graph is disconnected; no spanning tree exists");
  r.gamma_h = lambda2_of(g, r.tree);
  r.wall_time = since(t0);
  return r;
}

HeuristicResult run_mch(const WeightedGraph& g, const HeuristicParams& p, const OAConfig& cfg) {
  const auto t0 = Clock::now();
  const int n = g.node_count();
  if (n < 3) throw HeuristicError("heuristic needs at least 3 nodes");
  if (p.h1 < 1 || p.h1 > n) throw HeuristicError("h1 must lie in [1, n]");
  if (p.h2 < 1 || p.h2 > n - 1) throw HeuristicError("h2 must lie in [1, n-1]");
  const double cap = initial_upper_bound(g);
  if (!(cap > 1e-12)) throw HeuristicError("graph is disconnected; no spanning tree exists");

  DesignModel dm;
  int slots = 0;
  if (p.mode == DegreeMode::dclbf) {
    if (p.degree < 1 || p.degree > n - 1) throw HeuristicError("k must lie in [1, n-1]");
    dm = dclbf_model(g, p.degree, cap);
    slots = n - p.degree;
  } else {
    if (p.degree < 2 || p.degree > n - 1) throw HeuristicError("d must lie in [2, n-1]");
    dm = degree_capped_model(g, p.degree, cap);
    slots = p.degree;
  }
  const PriorityOrders orders = ranking(g, slots, p.h1);
  OAConfig run_cfg = cfg;
  run_cfg.sizes = {n};

  // Candidates run in rank order; each only has to beat the best tree so far,
  // which the solver uses as a cutoff.
  HeuristicResult res;
  bool any = false;
  // In DCLBF mode each candidate's own star is feasible for its restriction, so
  // the best of them is a valid starting value.
  if (p.mode == DegreeMode::dclbf) {
    for (int c = 0; c < p.h1; ++c) {
      const EdgeSelection star = star_at(g, orders.center_order[static_cast<std::size_t>(c)]);
      if (!is_spanning_tree(g, star)) continue;
      const double l2 = lambda2_of(g, star);
      if (!any || l2 > res.gamma_h) {
        res.tree = star;
        res.gamma_h = l2;
        any = true;
      }
    }
  }
  for (int c = 0; c < p.h1; ++c) {
    const auto tc = Clock::now();
    CandidateRun run;
    run.center = orders.center_order[static_cast<std::size_t>(c)];
    const DesignModel restricted = restrict_mch(dm, g, orders, run.center, p.h1, p.h2);
    OAConfig cand_cfg = run_cfg;
    if (any) cand_cfg.milp_limits.cutoff = res.gamma_h;
    const OAResult r = run_algorithm1(g, restricted, cand_cfg);
    run.status = r.status;
    run.found = is_spanning_tree(g, r.tree);
    if (run.found) {
      run.tree = r.tree;
      run.gamma_h = lambda2_of(g, r.tree);
      if (!any || run.gamma_h > res.gamma_h) {
        res.tree = run.tree;
        res.gamma_h = run.gamma_h;
        any = true;
      }
    }
    run.wall_time = since(tc);
    res.candidates.push_back(std::move(run));
  }
  if (!any) throw HeuristicError("no restricted candidate produced a spanning tree");
  res.wall_time = since(t0);
  return res;
}

}  // namespace

PriorityOrders ranking(const WeightedGraph& g, int slots, int h1) {
  const int n = g.node_count();
  if (slots < 1 || slots > n - 1) throw HeuristicError("slots must lie in [1, n-1]");
  if (h1 < 1 || h1 > n) throw HeuristicError("h1 must lie in [1, n]");
  const auto un = static_cast<std::size_t>(n);

  PriorityOrders o;
  o.slots = slots;
  o.center_score.assign(un, 0.0);
  o.neighbor_order.resize(un);
  o.leaf_edge_order.resize(un);
  for (NodeId i = 1; i <= n; ++i) {
    std::vector<double> w(un, 0.0);
    for (NodeId j = 1; j <= n; ++j) w[static_cast<std::size_t>(j - 1)] = g.weight(i, j);
    auto& nb = o.neighbor_order[static_cast<std::size_t>(i - 1)];
    nb = rank_nodes(n, i, w);
    double s = 0.0;
    for (int r = 0; r < slots; ++r) s += w[static_cast<std::size_t>(nb[static_cast<std::size_t>(r)] - 1)];
    o.center_score[static_cast<std::size_t>(i - 1)] = s;
  }
  o.center_order = rank_nodes(n, 0, o.center_score);

  for (int c = 0; c < h1; ++c) {
    const NodeId center = o.center_order[static_cast<std::size_t>(c)];
    const EdgeSelection star = star_at(g, center);
    // A star missing some spokes is disconnected; its λ2 is 0 but a Fiedler vector still exists.
    const std::vector<double> v = algebraic_connectivity(weighted_laplacian(g, star)).fiedler;

    auto& per_leaf = o.leaf_edge_order[static_cast<std::size_t>(center - 1)];
    per_leaf.assign(un, {});
    for (NodeId u : o.leaves(center)) {
      std::vector<double> score(un, 0.0);
      const double vu = v[static_cast<std::size_t>(u - 1)];
      for (NodeId l = 1; l <= n; ++l) {
        const double d = vu - v[static_cast<std::size_t>(l - 1)];
        score[static_cast<std::size_t>(l - 1)] = g.weight(u, l) * d * d;
      }
      per_leaf[static_cast<std::size_t>(u - 1)] = rank_nodes(n, center, score);
    }
  }
  return o;
}

HeuristicResult mch(const WeightedGraph& g, const HeuristicParams& params, const OAConfig& cfg) {
  if (params.mode != DegreeMode::dclbf) throw HeuristicError("mch expects DCLBF mode; use mch_degree_capped");
  return run_mch(g, params, cfg);
}

HeuristicResult mch_degree_capped(const WeightedGraph& g, const HeuristicParams& params, const OAConfig& cfg) {
  if (params.mode != DegreeMode::capped) throw HeuristicError("mch_degree_capped expects capped mode");
  HeuristicResult r = run_mch(g, params, cfg);
  for (int d : degrees(g, r.tree))
    if (d > params.degree) throw HeuristicError("internal: returned tree violates the degree cap");
  return r;
}

HeuristicResult max_weight_spanning_tree(const WeightedGraph& g) { return kruskal(g, true); }
HeuristicResult min_weight_spanning_tree(const WeightedGraph& g) { return kruskal(g, false); }

HeuristicResult best_star(const WeightedGraph& g) {
  const auto t0 = Clock::now();
  const int n = g.node_count();
  HeuristicResult best;
  bool any = false;
  for (NodeId h = 1; h <= n; ++h) {
    EdgeSelection x(g.edge_count());
    bool ok = true;
    for (NodeId j = 1; j <= n && ok; ++j) {
      if (j == h) continue;
      const int e = g.edge_index(h, j);
      if (e < 0) ok = false;
      else x.set(static_cast<std::size_t>(e));
    }
    if (!ok) continue;
    const double l2 = lambda2_of(g, x);
    if (!any || l2 > best.gamma_h) {
      best.tree = x;
      best.gamma_h = l2;
      any = true;
    }
  }
  if (!any) throw HeuristicError("no node is adjacent to every other node; no star exists");
  best.wall_time = since(t0);
  return best;
}

double tree_weight(const WeightedGraph& g, const EdgeSelection& x) {
  check_conforms(g, x);
  double s = 0.0;
  for (std::size_t e = 0; e < x.size(); ++e)
    if (x[e]) s += g.edge(e).w;
  return s;
}

void write_candidates_csv(std::ostream& os, const HeuristicResult& r) {
  os << "center,found,gamma_h,status,wall_time\n";
  const auto prec = os.precision(12);
  for (const auto& c : r.candidates)
    os << c.center << ',' << (c.found ? 1 : 0) << ',' << c.gamma_h << ',' << to_string(c.status) << ',' << c.wall_time << '\n';
  os.precision(prec);
}

}  // namespace acnet
