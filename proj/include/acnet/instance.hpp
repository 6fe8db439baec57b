#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "acnet/graph.hpp"

namespace acnet {

enum class InstanceErrorKind {
  io,
  malformed_header,
  malformed_edge,
  edge_count_mismatch,
  node_out_of_range,
  self_loop,
  duplicate_edge,
  nonpositive_weight,
  unrecognized_format,
};

std::string to_string(InstanceErrorKind k);

class InstanceError : public std::runtime_error {
 public:
  InstanceError(InstanceErrorKind kind, int line, const std::string& what);
  InstanceErrorKind kind() const { return kind_; }
  int line() const { return line_; }  // 1-based, 0 when not tied to a line

 private:
  InstanceErrorKind kind_;
  int line_;
};

/// Graph plus free-form `#! key value` metadata (seed, generator parameters).
struct Instance {
  WeightedGraph graph;
  std::map<std::string, std::string> metadata;
};

/// Grammar (docs/instance_format.md): '#' starts a comment line, blank lines
/// are skipped, the first data line is "n m", followed by exactly m lines
/// "i j w" with 1 ≤ i, j ≤ n, i ≠ j, w > 0 and no repeated pair.
Instance parse_instance(std::istream& is);
Instance read_instance(const std::filesystem::path& path);

/// Canonical text: sorted metadata, header, edges in (i, j) order with i < j and
/// weights at 17 significant digits, so parse(format(x)) == x.
std::string format_instance(const Instance& inst);
void write_instance(const Instance& inst, const std::filesystem::path& path);

/// Best-effort reader for the published instance layout: either an n×n weight
/// matrix (zero diagonal, symmetric) or a header-less "i j w" edge list that
/// may be 0-based.
Instance read_published(const std::filesystem::path& path);

/// FNV-1a 64 over the canonical text of the graph (metadata excluded).
std::uint64_t instance_digest(const WeightedGraph& g);
std::string digest_hex(std::uint64_t d);

class GeneratorError : public std::runtime_error {
 public:
  GeneratorError(const std::string& what, long accepted, long draws)
      : std::runtime_error(what), accepted_(accepted), draws_(draws) {}
  long accepted() const { return accepted_; }
  long draws() const { return draws_; }

 private:
  long accepted_;
  long draws_;
};

struct GeneratorOptions {
  int n = 8;
  int count = 10;
  double w_lo = 1.0;
  double w_hi = 10.0;
  std::uint64_t seed = 1;
  int max_draws_per_instance = 50;
  int oracle_max_nodes = 7;  // brute force at or below this size, mch above
};

struct GeneratedInstance {
  Instance instance;
  std::uint64_t draw = 0;
  double best_lambda2 = 0.0;  // certifying tree
  double star_lambda2 = 0.0;
  double max_weight_lambda2 = 0.0;
};

struct FilterVerdict {
  bool accepted = false;
  double best_lambda2 = 0.0;
  double star_lambda2 = 0.0;
  double max_weight_lambda2 = 0.0;
};

/// Some tree beats both the best star and the max-weight tree in λ2.
FilterVerdict nontrivial_filter(const WeightedGraph& g, int oracle_max_nodes = 7);

/// Complete graph on n nodes with weights uniform in [lo, hi) drawn from the
/// draw-th derived stream of seed.
WeightedGraph random_complete_graph(int n, double lo, double hi, std::uint64_t seed, std::uint64_t draw);

/// Draws are filtered in index order. Throws GeneratorError with acceptance
/// statistics once count·max_draws_per_instance draws are spent.
std::vector<GeneratedInstance> generate_instances(const GeneratorOptions& opts);

/// Tree paired with the graph it spans.
struct TreeOnGraph {
  WeightedGraph graph;
  EdgeSelection tree;
};

/// Degree → percent of all nodes across all trees.
std::map<int, double> degree_histogram(const std::vector<TreeOnGraph>& trees);

}  // namespace acnet
