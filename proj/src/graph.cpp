#include "acnet/graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace acnet {

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 2) throw GraphError("graph needs at least 2 nodes, got " + std::to_string(n));
  for (auto& e : edges_) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i == e.j) throw GraphError("self-loop at node " + std::to_string(e.i));
    if (e.i < 1 || e.j > n)
      throw GraphError("edge " + std::to_string(e.i) + "-" + std::to_string(e.j) + " out of range");
    if (!(e.w > 0.0))
      throw GraphError("non-positive weight on edge " + std::to_string(e.i) + "-" + std::to_string(e.j));
  }
  std::stable_sort(edges_.begin(), edges_.end(),
                   [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  index_.assign(static_cast<std::size_t>(n) * n, -1);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto& e = edges_[k];
    auto& slot = index_[static_cast<std::size_t>(e.i - 1) * n + (e.j - 1)];
    if (slot >= 0)
      throw GraphError("duplicate edge " + std::to_string(e.i) + "-" + std::to_string(e.j));
    slot = static_cast<int>(k);
    index_[static_cast<std::size_t>(e.j - 1) * n + (e.i - 1)] = static_cast<int>(k);
  }
}

WeightedGraph WeightedGraph::complete(int n, double w) {
  std::vector<Edge> edges;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) edges.push_back({i, j, w});
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph WeightedGraph::complete_from(const SymMatrix& weights) {
  const int n = static_cast<int>(weights.size());
  std::vector<Edge> edges;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) edges.push_back({i, j, weights(i - 1, j - 1)});
  return WeightedGraph(n, std::move(edges));
}

int WeightedGraph::edge_index(NodeId a, NodeId b) const {
  if (a < 1 || b < 1 || a > n_ || b > n_ || a == b) return -1;
  return index_[static_cast<std::size_t>(a - 1) * n_ + (b - 1)];
}

double WeightedGraph::weight(NodeId a, NodeId b) const {
  const int k = edge_index(a, b);
  return k < 0 ? 0.0 : edges_[static_cast<std::size_t>(k)].w;
}

bool WeightedGraph::is_complete() const {
  return edges_.size() == static_cast<std::size_t>(n_) * (n_ - 1) / 2;
}

std::size_t EdgeSelection::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

EdgeSelection EdgeSelection::all(const WeightedGraph& g) {
  EdgeSelection x(g.edge_count());
  std::fill(x.bits.begin(), x.bits.end(), std::uint8_t{1});
  return x;
}

EdgeSelection EdgeSelection::from_pairs(const WeightedGraph& g,
                                        const std::vector<std::pair<NodeId, NodeId>>& pairs) {
  EdgeSelection x(g.edge_count());
  for (auto [a, b] : pairs) {
    const int k = g.edge_index(a, b);
    if (k < 0) throw GraphError("pair " + std::to_string(a) + "-" + std::to_string(b) + " is not an edge");
    x.set(static_cast<std::size_t>(k));
  }
  return x;
}

void check_conforms(const WeightedGraph& g, const EdgeSelection& x) {
  if (x.size() != g.edge_count())
    throw GraphError("edge selection has " + std::to_string(x.size()) + " bits, graph has " +
                     std::to_string(g.edge_count()) + " edges");
}

NodeCut make_cut(const WeightedGraph& g, const std::vector<NodeId>& inside) {
  std::vector<char> in(static_cast<std::size_t>(g.node_count()) + 1, 0);
  for (NodeId v : inside) in.at(static_cast<std::size_t>(v)) = 1;
  NodeCut cut{inside, {}};
  std::sort(cut.inside.begin(), cut.inside.end());
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    const auto& e = g.edge(k);
    if (in[static_cast<std::size_t>(e.i)] != in[static_cast<std::size_t>(e.j)]) cut.cut_edges.push_back(k);
  }
  return cut;
}

SymMatrix edge_laplacian(int n, NodeId i, NodeId j, double w) {
  if (i < 1 || j < 1 || i > n || j > n || i == j)
    throw GraphError("edge_laplacian: invalid node pair " + std::to_string(i) + "-" + std::to_string(j));
  if (!(w > 0.0)) throw GraphError("edge_laplacian: weight must be positive");
  SymMatrix l(static_cast<std::size_t>(n));
  const auto a = static_cast<std::size_t>(i - 1);
  const auto b = static_cast<std::size_t>(j - 1);
  l(a, a) = w;
  l(b, b) = w;
  l(a, b) = -w;
  l(b, a) = -w;
  return l;
}

SymMatrix weighted_laplacian(const WeightedGraph& g, const EdgeSelection& x) {
  check_conforms(g, x);
  SymMatrix l(static_cast<std::size_t>(g.node_count()));
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!x[k]) continue;
    const auto& e = g.edge(k);
    const auto a = static_cast<std::size_t>(e.i - 1);
    const auto b = static_cast<std::size_t>(e.j - 1);
    l(a, a) += e.w;
    l(b, b) += e.w;
    l(a, b) -= e.w;
    l(b, a) -= e.w;
  }
  return l;
}

SymMatrix weighted_laplacian(const WeightedGraph& g, const std::vector<double>& x) {
  if (x.size() != g.edge_count()) throw GraphError("weighted_laplacian: length mismatch");
  SymMatrix l(static_cast<std::size_t>(g.node_count()));
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto& e = g.edge(k);
    const double v = e.w * x[k];
    const auto a = static_cast<std::size_t>(e.i - 1);
    const auto b = static_cast<std::size_t>(e.j - 1);
    l(a, a) += v;
    l(b, b) += v;
    l(a, b) -= v;
    l(b, a) -= v;
  }
  return l;
}

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    return true;
  }
};

}  // namespace

std::vector<std::vector<NodeId>> connected_components(const WeightedGraph& g, const EdgeSelection& x) {
  check_conforms(g, x);
  const int n = g.node_count();
  DisjointSets ds(n);
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x[k]) ds.unite(g.edge(k).i - 1, g.edge(k).j - 1);
  std::vector<int> block_of(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<NodeId>> blocks;
  for (int v = 0; v < n; ++v) {
    const int r = ds.find(v);
    auto& b = block_of[static_cast<std::size_t>(r)];
    if (b < 0) {
      b = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[static_cast<std::size_t>(b)].push_back(v + 1);
  }
  return blocks;
}

bool is_spanning_tree(const WeightedGraph& g, const EdgeSelection& x) {
  check_conforms(g, x);
  const int n = g.node_count();
  if (x.count() != static_cast<std::size_t>(n - 1)) return false;
  DisjointSets ds(n);
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x[k] && !ds.unite(g.edge(k).i - 1, g.edge(k).j - 1)) return false;
  return true;
}

std::vector<int> degrees(const WeightedGraph& g, const EdgeSelection& x) {
  check_conforms(g, x);
  std::vector<int> deg(static_cast<std::size_t>(g.node_count()), 0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!x[k]) continue;
    ++deg[static_cast<std::size_t>(g.edge(k).i - 1)];
    ++deg[static_cast<std::size_t>(g.edge(k).j - 1)];
  }
  return deg;
}

std::vector<std::pair<NodeId, NodeId>> prufer_decode(int n, const std::vector<NodeId>& seq) {
  if (static_cast<int>(seq.size()) != n - 2) throw GraphError("prufer_decode: sequence length must be n-2");
  std::vector<int> degree(static_cast<std::size_t>(n) + 1, 1);
  for (NodeId v : seq) {
    if (v < 1 || v > n) throw GraphError("prufer_decode: label out of range");
    ++degree[static_cast<std::size_t>(v)];
  }
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(static_cast<std::size_t>(n) - 1);
  for (NodeId v : seq) {
    NodeId leaf = 1;
    while (degree[static_cast<std::size_t>(leaf)] != 1) ++leaf;
    out.emplace_back(std::min(leaf, v), std::max(leaf, v));
    --degree[static_cast<std::size_t>(leaf)];
    --degree[static_cast<std::size_t>(v)];
  }
  NodeId u = 0;
  NodeId w = 0;
  for (NodeId v = 1; v <= n; ++v) {
    if (degree[static_cast<std::size_t>(v)] == 1) (u == 0 ? u : w) = v;
  }
  out.emplace_back(u, w);
  return out;
}

void enumerate_spanning_trees(const WeightedGraph& g,
                              const std::function<bool(const EdgeSelection&)>& visit,
                              EnumerationLimits limits) {
  const int n = g.node_count();
  if (n > limits.max_nodes)
    throw GraphError("enumerate_spanning_trees: n=" + std::to_string(n) + " exceeds oracle limit " +
                     std::to_string(limits.max_nodes));
  if (n == 2) {
    if (g.edge_count() == 1) {
      EdgeSelection x(1);
      x.set(0);
      visit(x);
    }
    return;
  }

  if (g.is_complete()) {
    std::vector<NodeId> seq(static_cast<std::size_t>(n - 2), 1);
    while (true) {
      EdgeSelection x(g.edge_count());
      for (auto [a, b] : prufer_decode(n, seq)) x.set(static_cast<std::size_t>(g.edge_index(a, b)));
      if (!visit(x)) return;
      std::size_t pos = seq.size();
      while (pos > 0) {
        --pos;
        if (seq[pos] < n) {
          ++seq[pos];
          break;
        }
        seq[pos] = 1;
        if (pos == 0) return;
      }
    }
  }

  // Subset filtering over (n-1)-combinations of the edge list.
  const std::size_t m = g.edge_count();
  const auto need = static_cast<std::size_t>(n - 1);
  if (m < need) return;
  std::vector<std::size_t> pick(need);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    EdgeSelection x(m);
    for (std::size_t k : pick) x.set(k);
    if (is_spanning_tree(g, x) && !visit(x)) return;
    std::size_t pos = need;
    while (pos > 0) {
      --pos;
      if (pick[pos] != pos + m - need) break;
      if (pos == 0) return;
    }
    if (pick[pos] == pos + m - need) return;
    ++pick[pos];
    for (std::size_t q = pos + 1; q < need; ++q) pick[q] = pick[q - 1] + 1;
  }
}

MinCut global_min_cut(const WeightedGraph& g, const std::vector<double>& capacity) {
  const int n = g.node_count();
  if (capacity.size() != g.edge_count()) throw GraphError("capacity vector does not match edge count");
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    c[static_cast<std::size_t>(ed.i - 1)][static_cast<std::size_t>(ed.j - 1)] += capacity[e];
    c[static_cast<std::size_t>(ed.j - 1)][static_cast<std::size_t>(ed.i - 1)] += capacity[e];
  }
  // members[v]: original nodes merged into super-node v
  std::vector<std::vector<NodeId>> members(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) members[static_cast<std::size_t>(v)] = {v + 1};
  std::vector<int> alive(static_cast<std::size_t>(n));
  std::iota(alive.begin(), alive.end(), 0);

  MinCut best;
  best.value = std::numeric_limits<double>::infinity();
  while (alive.size() > 1) {
    std::vector<double> key(static_cast<std::size_t>(n), 0.0);
    std::vector<char> added(static_cast<std::size_t>(n), 0);
    int prev = -1;
    int last = -1;
    for (std::size_t step = 0; step < alive.size(); ++step) {
      int pick = -1;
      for (int v : alive)
        if (!added[static_cast<std::size_t>(v)] && (pick < 0 || key[static_cast<std::size_t>(v)] > key[static_cast<std::size_t>(pick)]))
          pick = v;
      if (pick < 0) break;
      added[static_cast<std::size_t>(pick)] = 1;
      prev = last;
      last = pick;
      for (int v : alive)
        if (!added[static_cast<std::size_t>(v)]) key[static_cast<std::size_t>(v)] += c[static_cast<std::size_t>(pick)][static_cast<std::size_t>(v)];
    }
    const double phase = key[static_cast<std::size_t>(last)];
    if (phase < best.value) {
      best.value = phase;
      best.side = members[static_cast<std::size_t>(last)];
    }
    auto& into = members[static_cast<std::size_t>(prev)];
    const auto& from = members[static_cast<std::size_t>(last)];
    into.insert(into.end(), from.begin(), from.end());
    for (int v : alive) {
      c[static_cast<std::size_t>(prev)][static_cast<std::size_t>(v)] += c[static_cast<std::size_t>(last)][static_cast<std::size_t>(v)];
      c[static_cast<std::size_t>(v)][static_cast<std::size_t>(prev)] = c[static_cast<std::size_t>(prev)][static_cast<std::size_t>(v)];
    }
    c[static_cast<std::size_t>(prev)][static_cast<std::size_t>(prev)] = 0.0;
    alive.erase(std::find(alive.begin(), alive.end(), last));
  }
  if (n < 2) best.value = 0.0;
  std::sort(best.side.begin(), best.side.end());
  return best;
}

}  // namespace acnet
