#include "acnet/instance.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "acnet/heuristics.hpp"

namespace acnet {

namespace {

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    const std::size_t start = k;
    while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    if (k > start) out.push_back(line.substr(start, k - start));
  }
  return out;
}

template <class T>
bool parse_full(std::string_view s, T& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

struct EdgeChecker {
  int n;
  std::set<std::pair<int, int>> seen;
  std::vector<Edge> edges;

  void add(long a, long b, double w, int line) {
    if (a < 1 || b < 1 || a > n || b > n)
      throw InstanceError(InstanceErrorKind::node_out_of_range, line, "node index outside 1.." + std::to_string(n));
    if (a == b) throw InstanceError(InstanceErrorKind::self_loop, line, "self-loop at node " + std::to_string(a));
    if (!(w > 0.0) || !std::isfinite(w))
      throw InstanceError(InstanceErrorKind::nonpositive_weight, line, "edge weight must be positive and finite");
    const int i = static_cast<int>(std::min(a, b));
    const int j = static_cast<int>(std::max(a, b));
    if (!seen.insert({i, j}).second)
      throw InstanceError(InstanceErrorKind::duplicate_edge, line,
                          "edge {" + std::to_string(i) + "," + std::to_string(j) + "} appears twice");
    edges.push_back({i, j, w});
  }
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError(InstanceErrorKind::io, 0, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double tree_lambda2(const WeightedGraph& g, const EdgeSelection& x) {
  return algebraic_connectivity(weighted_laplacian(g, x)).lambda2;
}

}  // namespace

std::string to_string(InstanceErrorKind k) {
  switch (k) {
    case InstanceErrorKind::io: return "io";
    case InstanceErrorKind::malformed_header: return "malformed_header";
    case InstanceErrorKind::malformed_edge: return "malformed_edge";
    case InstanceErrorKind::edge_count_mismatch: return "edge_count_mismatch";
    case InstanceErrorKind::node_out_of_range: return "node_out_of_range";
    case InstanceErrorKind::self_loop: return "self_loop";
    case InstanceErrorKind::duplicate_edge: return "duplicate_edge";
    case InstanceErrorKind::nonpositive_weight: return "nonpositive_weight";
    case InstanceErrorKind::unrecognized_format: return "unrecognized_format";
  }
  return "unknown";
}

InstanceError::InstanceError(InstanceErrorKind kind, int line, const std::string& what)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + to_string(kind) + ": " + what),
      kind_(kind),
      line_(line) {}

Instance parse_instance(std::istream& is) {
  Instance inst;
  std::string line;
  int lineno = 0;
  long n = -1;
  long m = -1;
  EdgeChecker chk{0, {}, {}};
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view sv = line;
    if (sv.starts_with("#!")) {
      const auto t = tokens(sv.substr(2));
      if (t.empty()) continue;
      const auto rest = sv.substr(2);
      const auto after = rest.find(t[0]) + t[0].size();
      const auto vt = tokens(rest.substr(after));
      std::string value;
      for (std::size_t k = 0; k < vt.size(); ++k) value += (k ? " " : "") + std::string(vt[k]);
      inst.metadata[std::string(t[0])] = value;
      continue;
    }
    if (sv.starts_with("#")) continue;
    const auto t = tokens(sv);
    if (t.empty()) continue;
    if (n < 0) {
      if (t.size() != 2 || !parse_full(t[0], n) || !parse_full(t[1], m) || n < 1 || m < 0)
        throw InstanceError(InstanceErrorKind::malformed_header, lineno, "expected \"n m\" with n >= 1, m >= 0");
      if (m > n * (n - 1) / 2)
        throw InstanceError(InstanceErrorKind::malformed_header, lineno, "more edges than node pairs");
      chk.n = static_cast<int>(n);
      continue;
    }
    long a = 0;
    long b = 0;
    double w = 0.0;
    if (t.size() != 3 || !parse_full(t[0], a) || !parse_full(t[1], b) || !parse_full(t[2], w))
      throw InstanceError(InstanceErrorKind::malformed_edge, lineno, "expected \"i j w\"");
    if (static_cast<long>(chk.edges.size()) == m)
      throw InstanceError(InstanceErrorKind::edge_count_mismatch, lineno, "more edge lines than the header's " + std::to_string(m));
    chk.add(a, b, w, lineno);
  }
  if (n < 0) throw InstanceError(InstanceErrorKind::malformed_header, lineno, "missing header");
  if (static_cast<long>(chk.edges.size()) != m)
    throw InstanceError(InstanceErrorKind::edge_count_mismatch, lineno,
                        "header announces " + std::to_string(m) + " edges, found " + std::to_string(chk.edges.size()));
  inst.graph = WeightedGraph(static_cast<int>(n), std::move(chk.edges));
  return inst;
}

Instance read_instance(const std::filesystem::path& path) {
  std::istringstream is(read_file(path));
  return parse_instance(is);
}

std::string format_instance(const Instance& inst) {
  std::string out;
  for (const auto& [k, v] : inst.metadata) out += "#! " + k + (v.empty() ? "" : " " + v) + "\n";
  out += std::to_string(inst.graph.node_count()) + " " + std::to_string(inst.graph.edge_count()) + "\n";
  for (const auto& e : inst.graph.edges()) out += std::to_string(e.i) + " " + std::to_string(e.j) + " " + fmt17(e.w) + "\n";
  return out;
}

void write_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InstanceError(InstanceErrorKind::io, 0, "cannot write " + path.string());
  out << format_instance(inst);
  if (!out) throw InstanceError(InstanceErrorKind::io, 0, "write failed for " + path.string());
}

Instance read_published(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<std::vector<double>> rows;
  {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
      if (line.starts_with("#")) continue;
      // Commas and semicolons are treated as whitespace.
      std::replace_if(line.begin(), line.end(), [](char c) { return c == ',' || c == ';'; }, ' ');
      const auto t = tokens(line);
      if (t.empty()) continue;
      std::vector<double> row;
      for (auto s : t) {
        double v = 0.0;
        if (!parse_full(s, v))
          throw InstanceError(InstanceErrorKind::unrecognized_format, static_cast<int>(rows.size() + 1), "non-numeric token");
        row.push_back(v);
      }
      rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) throw InstanceError(InstanceErrorKind::unrecognized_format, 0, "empty file");

  // Square weight matrix.
  const std::size_t n = rows.size();
  // A three-line edge list is also 3×3; only a zero diagonal marks a matrix.
  bool square = n >= 2 && std::all_of(rows.begin(), rows.end(), [&](const auto& r) { return r.size() == n; });
  for (std::size_t i = 0; square && i < n; ++i) square = rows[i][i] == 0.0;
  if (square) {
    EdgeChecker chk{static_cast<int>(n), {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (std::abs(rows[i][j] - rows[j][i]) > 1e-12 * std::max(1.0, std::abs(rows[i][j])))
          throw InstanceError(InstanceErrorKind::unrecognized_format, static_cast<int>(i + 1), "matrix is not symmetric");
        if (rows[i][j] != 0.0) chk.add(static_cast<long>(i + 1), static_cast<long>(j + 1), rows[i][j], static_cast<int>(i + 1));
      }
    }
    return {WeightedGraph(static_cast<int>(n), std::move(chk.edges)), {{"source_format", "published_matrix"}}};
  }

  // Header-less edge list, optionally preceded by a node count line.
  std::size_t first = 0;
  long declared = -1;
  if (rows[0].size() == 1 || (rows[0].size() == 2 && rows.size() > 1 && rows[1].size() == 3)) {
    declared = static_cast<long>(rows[0][0]);
    first = 1;
  }
  long lo = 1L << 40;
  long hi = -1;
  for (std::size_t r = first; r < rows.size(); ++r) {
    if (rows[r].size() != 3) throw InstanceError(InstanceErrorKind::unrecognized_format, static_cast<int>(r + 1), "expected an n×n matrix or \"i j w\" records");
    for (int k = 0; k < 2; ++k) {
      const double v = rows[r][static_cast<std::size_t>(k)];
      if (v != std::floor(v)) throw InstanceError(InstanceErrorKind::unrecognized_format, static_cast<int>(r + 1), "non-integer node index");
      lo = std::min(lo, static_cast<long>(v));
      hi = std::max(hi, static_cast<long>(v));
    }
  }
  const long shift = lo == 0 ? 1 : 0;
  const long nn = std::max(declared, hi + shift);
  EdgeChecker chk{static_cast<int>(nn), {}, {}};
  for (std::size_t r = first; r < rows.size(); ++r)
    chk.add(static_cast<long>(rows[r][0]) + shift, static_cast<long>(rows[r][1]) + shift, rows[r][2], static_cast<int>(r + 1));
  return {WeightedGraph(static_cast<int>(nn), std::move(chk.edges)),
          {{"source_format", shift ? "published_edges_0based" : "published_edges"}}};
}

std::uint64_t instance_digest(const WeightedGraph& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : format_instance({g, {}})) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string digest_hex(std::uint64_t d) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(d));
  return buf;
}

FilterVerdict nontrivial_filter(const WeightedGraph& g, int oracle_max_nodes) {
  FilterVerdict v;
  v.star_lambda2 = best_star(g).gamma_h;
  v.max_weight_lambda2 = tree_lambda2(g, max_weight_spanning_tree(g).tree);
  const int n = g.node_count();
  if (n <= oracle_max_nodes) {
    enumerate_spanning_trees(g, [&](const EdgeSelection& x) {
      v.best_lambda2 = std::max(v.best_lambda2, tree_lambda2(g, x));
      return true;
    }, {std::max(9, oracle_max_nodes)});
  } else {
    HeuristicParams p;
    p.mode = DegreeMode::dclbf;
    p.degree = (n + 1) / 2;
    p.h1 = 5;
    p.h2 = std::min(5, n - 1);
    v.best_lambda2 = mch(g, p).gamma_h;
  }
  const double base = std::max(v.star_lambda2, v.max_weight_lambda2);
  v.accepted = v.best_lambda2 > base + 1e-9 * std::max(1.0, base);
  return v;
}

WeightedGraph random_complete_graph(int n, double lo, double hi, std::uint64_t seed, std::uint64_t draw) {
  if (n < 2) throw GraphError("random_complete_graph: n must be at least 2");
  if (!(lo > 0.0) || !(hi > lo)) throw GraphError("random_complete_graph: need 0 < lo < hi");
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(draw)));
  std::vector<Edge> edges;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      edges.push_back({i, j, lo + (hi - lo) * u});
    }
  return WeightedGraph(n, std::move(edges));
}

std::vector<GeneratedInstance> generate_instances(const GeneratorOptions& o) {
  if (o.n < 4) throw GraphError("generate_instances: n must be at least 4");
  if (o.count < 0 || o.max_draws_per_instance < 1) throw GraphError("generate_instances: bad count or retry cap");
  if (!(o.w_lo > 0.0 && o.w_lo < o.w_hi)) throw GraphError("generate_instances: need 0 < lo < hi");
  const long cap = static_cast<long>(o.count) * o.max_draws_per_instance;
  std::vector<GeneratedInstance> out;
  long draws = 0;
  const int batch = std::max(1, omp_get_max_threads());
  while (static_cast<int>(out.size()) < o.count) {
    if (draws >= cap) {
      std::ostringstream msg;
      msg << "generate_instances: retry cap reached, accepted " << out.size() << " of " << o.count << " after " << draws
          << " draws (acceptance rate " << (draws ? 100.0 * static_cast<double>(out.size()) / static_cast<double>(draws) : 0.0) << "%)";
      throw GeneratorError(msg.str(), static_cast<long>(out.size()), draws);
    }
    const int len = static_cast<int>(std::min<long>(batch, cap - draws));
    std::vector<WeightedGraph> graphs(static_cast<std::size_t>(len));
    std::vector<FilterVerdict> verdicts(static_cast<std::size_t>(len));
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(len));
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < len; ++k) {
      const auto d = static_cast<std::uint64_t>(draws + k);
      try {
        graphs[static_cast<std::size_t>(k)] = random_complete_graph(o.n, o.w_lo, o.w_hi, o.seed, d);
        verdicts[static_cast<std::size_t>(k)] = nontrivial_filter(graphs[static_cast<std::size_t>(k)], o.oracle_max_nodes);
      } catch (...) {
        failures[static_cast<std::size_t>(k)] = std::current_exception();
      }
    }
    for (const auto& f : failures)
      if (f) std::rethrow_exception(f);
    for (int k = 0; k < len && static_cast<int>(out.size()) < o.count; ++k) {
      const auto& v = verdicts[static_cast<std::size_t>(k)];
      if (!v.accepted) continue;
      GeneratedInstance gi;
      gi.draw = static_cast<std::uint64_t>(draws + k);
      gi.instance.graph = std::move(graphs[static_cast<std::size_t>(k)]);
      gi.instance.metadata = {{"seed", std::to_string(o.seed)},
                              {"draw", std::to_string(gi.draw)},
                              {"weights", fmt17(o.w_lo) + " " + fmt17(o.w_hi)},
                              {"generator", "uniform_complete"}};
      gi.best_lambda2 = v.best_lambda2;
      gi.star_lambda2 = v.star_lambda2;
      gi.max_weight_lambda2 = v.max_weight_lambda2;
      out.push_back(std::move(gi));
    }
    draws += len;
  }
  return out;
}

std::map<int, double> degree_histogram(const std::vector<TreeOnGraph>& trees) {
  if (trees.empty()) throw GraphError("degree_histogram: no trees");
  std::map<int, long> counts;
  long total = 0;
  for (const auto& t : trees) {
    if (!is_spanning_tree(t.graph, t.tree)) throw GraphError("degree_histogram: selection is not a spanning tree");
    for (int d : degrees(t.graph, t.tree)) {
      ++counts[d];
      ++total;
    }
  }
  std::map<int, double> out;
  for (const auto& [d, c] : counts) out[d] = 100.0 * static_cast<double>(c) / static_cast<double>(total);
  return out;
}

}  // namespace acnet
