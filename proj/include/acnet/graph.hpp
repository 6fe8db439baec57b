#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "acnet/linalg.hpp"

namespace acnet {

/// 1-based node identifier, as used in files, reports and the CLI.
using NodeId = int;

struct Edge {
  NodeId i = 0;  // i < j
  NodeId j = 0;
  double w = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Undirected simple graph with strictly positive edge weights. Edges are kept
/// in lexicographic (i, j) order; EdgeSelection bits follow that order.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(int n, std::vector<Edge> edges);

  static WeightedGraph complete(int n, double w = 1.0);
  /// Complete graph from a symmetric weight matrix (diagonal ignored).
  static WeightedGraph complete_from(const SymMatrix& weights);

  int node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }

  /// Index of edge {a, b} in edges(), or -1 when absent. Order of a, b is irrelevant.
  int edge_index(NodeId a, NodeId b) const;
  /// Weight of {a, b}, 0 when the pair is not an edge.
  double weight(NodeId a, NodeId b) const;
  bool is_complete() const;

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> index_;  // n*n lookup, -1 for non-edges
};

/// Binary edge indicator bound to a parent graph's edge order.
struct EdgeSelection {
  std::vector<std::uint8_t> bits;

  EdgeSelection() = default;
  explicit EdgeSelection(std::size_t m) : bits(m, 0) {}

  std::size_t size() const { return bits.size(); }
  bool operator[](std::size_t e) const { return bits[e] != 0; }
  void set(std::size_t e, bool v = true) { bits[e] = v ? 1 : 0; }
  std::size_t count() const;

  static EdgeSelection all(const WeightedGraph& g);
  /// Selection from a list of node pairs; throws if a pair is not an edge of g.
  static EdgeSelection from_pairs(const WeightedGraph& g,
                                  const std::vector<std::pair<NodeId, NodeId>>& pairs);

  friend bool operator==(const EdgeSelection&, const EdgeSelection&) = default;
};

struct NodeCut {
  std::vector<NodeId> inside;
  std::vector<std::size_t> cut_edges;  // indices into the parent edge list
};

NodeCut make_cut(const WeightedGraph& g, const std::vector<NodeId>& inside);

SymMatrix edge_laplacian(int n, NodeId i, NodeId j, double w);
SymMatrix weighted_laplacian(const WeightedGraph& g, const EdgeSelection& x);
/// Laplacian for fractional edge values (LP points); x.size() must equal |E|.
SymMatrix weighted_laplacian(const WeightedGraph& g, const std::vector<double>& x);

bool is_spanning_tree(const WeightedGraph& g, const EdgeSelection& x);
/// Blocks are sorted internally and ordered by their smallest node.
std::vector<std::vector<NodeId>> connected_components(const WeightedGraph& g,
                                                      const EdgeSelection& x);
/// Node degrees (index 0 is node 1).
std::vector<int> degrees(const WeightedGraph& g, const EdgeSelection& x);

struct EnumerationLimits {
  int max_nodes = 9;
};

/// Calls visit once per spanning tree of g. Complete graphs are enumerated via
/// Prüfer sequences, others by filtering (n-1)-edge subsets. Returning false
/// from visit stops the enumeration.
void enumerate_spanning_trees(const WeightedGraph& g,
                              const std::function<bool(const EdgeSelection&)>& visit,
                              EnumerationLimits limits = {});

/// Decode a Prüfer sequence (1-based labels) into the tree's edge pairs.
std::vector<std::pair<NodeId, NodeId>> prufer_decode(int n, const std::vector<NodeId>& seq);

void check_conforms(const WeightedGraph& g, const EdgeSelection& x);

struct MinCut {
  double value = 0.0;
  std::vector<NodeId> side;  // one shore, sorted
};

/// Stoer–Wagner global minimum cut with per-edge capacities (size |E|).
MinCut global_min_cut(const WeightedGraph& g, const std::vector<double>& capacity);

}  // namespace acnet
