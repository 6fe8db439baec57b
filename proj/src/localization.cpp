#include "acnet/localization.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <random>

#include "acnet/heuristics.hpp"

namespace acnet {

namespace {

SymMatrix symmetrized(const SymMatrix& a) {
  SymMatrix s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

void require_spd(const SymMatrix& a, const char* what) {
  if (a.size() == 0) throw LocalizationError(std::string(what) + ": empty matrix");
  if (a.max_asymmetry() > 1e-10) throw LocalizationError(std::string(what) + ": not symmetric");
  const auto eig = sym_eigen(a);
  if (eig.values.front() <= 1e-14 * std::max(1.0, std::abs(eig.values.back())))
    throw LocalizationError(std::string(what) + ": not positive definite");
}

const SymMatrix& q_or_identity(const NoiseModel& noise, std::size_t n, SymMatrix& storage) {
  if (noise.q.size() == 0) {
    storage = SymMatrix::identity(n);
    return storage;
  }
  if (noise.q.size() != n) throw LocalizationError("noise model: Q has the wrong size");
  return noise.q;
}

}  // namespace

SymMatrix dirichlet_laplacian(const WeightedGraph& g, const EdgeSelection& tree, const NoiseModel& noise) {
  check_conforms(g, tree);
  const int n = g.node_count();
  if (!(noise.c_ref > 0.0)) throw LocalizationError("dirichlet_laplacian: c_ref must be positive");
  if (noise.reference < 1 || noise.reference > n) throw LocalizationError("dirichlet_laplacian: reference node out of range");
  if (!noise.c.empty() && noise.c.size() != g.edge_count())
    throw LocalizationError("dirichlet_laplacian: measurement weights do not match the edge list");
  if (connected_components(g, tree).size() != 1)
    throw LocalizationError("dirichlet_laplacian: selection is disconnected, Laplacian would be singular");

  SymMatrix l(static_cast<std::size_t>(n));
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (!tree[e]) continue;
    const double c = noise.c.empty() ? g.edge(e).w : noise.c[e];
    if (!(c > 0.0)) throw LocalizationError("dirichlet_laplacian: measurement weights must be positive");
    const auto a = static_cast<std::size_t>(g.edge(e).i - 1);
    const auto b = static_cast<std::size_t>(g.edge(e).j - 1);
    l(a, a) += c;
    l(b, b) += c;
    l(a, b) -= c;
    l(b, a) -= c;
  }
  const auto r = static_cast<std::size_t>(noise.reference - 1);
  l(r, r) += noise.c_ref;
  return l;
}

SymMatrix steady_state_covariance(const SymMatrix& l, const SymMatrix& q) {
  require_spd(l, "steady_state_covariance: L");
  require_spd(q, "steady_state_covariance: Q");
  if (l.size() != q.size()) throw LocalizationError("steady_state_covariance: size mismatch");
  const SymMatrix qh = psd_function(q, PsdFunction::sqrt);
  const SymMatrix m = symmetrized(qh * l * qh);
  return symmetrized(qh * psd_function(m, PsdFunction::inv_sqrt) * qh);
}

double covariance_lower_bound(const SymMatrix& l, const SymMatrix& q) {
  require_spd(l, "covariance_lower_bound: L");
  require_spd(q, "covariance_lower_bound: Q");
  // ‖A⁻¹‖ of an SPD matrix is 1/λ_min(A).
  return std::sqrt(min_eigenvalue(q) / min_eigenvalue(l));
}

double riccati_residual(const SymMatrix& p, const SymMatrix& l, const SymMatrix& q) {
  return (q - p * l * p).frobenius_norm();
}

CovarianceReport compare_topologies(const WeightedGraph& g, const std::vector<LabeledTree>& trees,
                                    const NoiseModel& noise) {
  SymMatrix storage;
  const SymMatrix& q = q_or_identity(noise, static_cast<std::size_t>(g.node_count()), storage);
  require_spd(q, "compare_topologies: Q");
  for (const auto& t : trees)
    if (!is_spanning_tree(g, t.tree)) throw LocalizationError("compare_topologies: '" + t.label + "' is not a spanning tree");

  CovarianceReport rep;
  rep.rows.resize(trees.size());
  std::vector<std::string> errors(trees.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(trees.size()); ++k) {
    const auto& t = trees[static_cast<std::size_t>(k)];
    auto& row = rep.rows[static_cast<std::size_t>(k)];
    try {
      const SymMatrix l = dirichlet_laplacian(g, t.tree, noise);
      const SymMatrix p = steady_state_covariance(l, q);
      row.label = t.label;
      row.lambda2 = algebraic_connectivity(weighted_laplacian(g, t.tree)).lambda2;
      row.p_norm = spectral_norm(p);
      row.bound = covariance_lower_bound(l, q);
      row.residual = riccati_residual(p, l, q);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(k)] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw LocalizationError(e);
  std::stable_sort(rep.rows.begin(), rep.rows.end(),
                   [](const CovarianceRow& a, const CovarianceRow& b) { return a.p_norm < b.p_norm; });
  return rep;
}

EdgeSelection greedy_chain(const WeightedGraph& g) {
  const int n = g.node_count();
  if (n < 2) throw LocalizationError("greedy_chain: need at least two nodes");
  std::size_t heaviest = 0;
  for (std::size_t e = 1; e < g.edge_count(); ++e)
    if (g.edge(e).w > g.edge(heaviest).w) heaviest = e;
  std::vector<NodeId> path{g.edge(heaviest).i, g.edge(heaviest).j};
  std::vector<bool> used(static_cast<std::size_t>(n + 1), false);
  used[static_cast<std::size_t>(path[0])] = used[static_cast<std::size_t>(path[1])] = true;

  while (static_cast<int>(path.size()) < n) {
    double best_gain = -1e300;
    NodeId best_v = 0;
    std::size_t best_pos = 0;  // insert before path[best_pos]; path.size() appends
    for (NodeId v = 1; v <= n; ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      auto consider = [&](std::size_t pos, double gain) {
        if (gain > best_gain) {
          best_gain = gain;
          best_v = v;
          best_pos = pos;
        }
      };
      if (g.edge_index(v, path.front()) >= 0) consider(0, g.weight(v, path.front()));
      for (std::size_t k = 0; k + 1 < path.size(); ++k)
        if (g.edge_index(path[k], v) >= 0 && g.edge_index(v, path[k + 1]) >= 0)
          consider(k + 1, g.weight(path[k], v) + g.weight(v, path[k + 1]) - g.weight(path[k], path[k + 1]));
      if (g.edge_index(path.back(), v) >= 0) consider(path.size(), g.weight(path.back(), v));
    }
    if (best_v == 0) throw LocalizationError("greedy_chain: no insertion keeps the path inside the graph");
    path.insert(path.begin() + static_cast<std::ptrdiff_t>(best_pos), best_v);
    used[static_cast<std::size_t>(best_v)] = true;
  }

  EdgeSelection x(g.edge_count());
  for (std::size_t k = 0; k + 1 < path.size(); ++k) x.set(static_cast<std::size_t>(g.edge_index(path[k], path[k + 1])));
  return x;
}

EdgeSelection random_spanning_tree(const WeightedGraph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> key(g.edge_count());
  for (auto& k : key) k = rng();
  std::vector<std::size_t> order(g.edge_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });

  std::vector<int> parent(static_cast<std::size_t>(g.node_count() + 1));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)];
    return a;
  };
  EdgeSelection x(g.edge_count());
  for (std::size_t e : order) {
    const int a = find(g.edge(e).i);
    const int b = find(g.edge(e).j);
    if (a == b) continue;
    parent[static_cast<std::size_t>(a)] = b;
    x.set(e);
  }
  if (!is_spanning_tree(g, x)) throw LocalizationError("random_spanning_tree: graph is disconnected");
  return x;
}

std::vector<LabeledTree> standard_candidates(const WeightedGraph& g, const EdgeSelection& optimal,
                                             int random_count, std::uint64_t seed) {
  std::vector<LabeledTree> out;
  out.push_back({"optimal", optimal});
  out.push_back({"best_star", best_star(g).tree});
  out.push_back({"max_weight", max_weight_spanning_tree(g).tree});
  out.push_back({"min_weight", min_weight_spanning_tree(g).tree});
  out.push_back({"chain", greedy_chain(g)});
  for (int k = 1; k <= random_count; ++k)
    out.push_back({"random_" + std::to_string(k), random_spanning_tree(g, seed + static_cast<std::uint64_t>(k))});
  return out;
}

void write_report_csv(std::ostream& os, const CovarianceReport& r) {
  const auto old = os.precision(17);
  os << "label,lambda2,p_norm,bound,residual\n";
  for (const auto& row : r.rows)
    os << row.label << ',' << row.lambda2 << ',' << row.p_norm << ',' << row.bound << ',' << row.residual << '\n';
  os.precision(old);
}

}  // namespace acnet
