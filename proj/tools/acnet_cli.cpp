#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "acnet/heuristics.hpp"
#include "acnet/instance.hpp"
#include "acnet/localization.hpp"
#include "acnet/oa_solver.hpp"
#include "acnet/report.hpp"

using namespace acnet;
using nlohmann::json;

namespace {

struct SolveFlags {
  double eps_opt = 1e-4;
  double eps_psd = 1e-6;
  std::string mode = "lazy";
  bool soc = false;
  double time_limit = 1e300;
  bool fractional = false;

  void attach(CLI::App* sub) {
    sub->add_option("--eps-opt", eps_opt, "Relative optimality gap")->check(CLI::PositiveNumber);
    sub->add_option("--eps-psd", eps_psd, "Eigenvalue violation threshold")->check(CLI::PositiveNumber);
    sub->add_option("--mode", mode, "lazy or outer")->check(CLI::IsMember({"lazy", "outer"}));
    sub->add_flag("--soc", soc, "Add second-order-cone cuts");
    sub->add_option("--time-limit", time_limit, "Seconds per solve")->check(CLI::PositiveNumber);
    sub->add_flag("--fractional-cuts", fractional, "Eigen and min-cut separation at fractional points");
  }

  OAConfig config() const {
    OAConfig c;
    c.eps_opt = eps_opt;
    c.eps_psd = eps_psd;
    c.mode = mode == "outer" ? OAMode::outer : OAMode::lazy;
    c.soc_mode = soc;
    c.time_limit = time_limit;
    c.fractional_cuts = fractional;
    return c;
  }

  json to_json() const {
    return {{"eps_opt", eps_opt}, {"eps_psd", eps_psd}, {"mode", mode}, {"soc", soc},
            {"time_limit", time_limit}, {"fractional_cuts", fractional}};
  }
};

struct InstanceFlags {
  std::string path;
  std::string format = "plain";

  void attach(CLI::App* sub) {
    sub->add_option("instance", path, "Instance file")->required()->check(CLI::ExistingFile);
    sub->add_option("--format", format, "plain or published")->check(CLI::IsMember({"plain", "published"}));
  }

  WeightedGraph load() const {
    return (format == "published" ? read_published(path) : read_instance(path)).graph;
  }
};

struct Output {
  std::string report;
  std::string trace;

  void attach(CLI::App* sub, bool with_trace) {
    sub->add_option("-o,--out", report, "RunReport JSON path (default stdout)");
    if (with_trace) sub->add_option("--trace", trace, "Per-iteration CSV trace path");
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::vector<int> parse_sizes(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || v < 1) throw CLI::ValidationError("--sizes", "expected a comma list of positive integers");
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("--sizes", "empty list");
  return out;
}

double bruteforce_best(const WeightedGraph& g, EdgeSelection& best) {
  double top = -1.0;
  enumerate_spanning_trees(g, [&](const EdgeSelection& x) {
    const double l2 = algebraic_connectivity(weighted_laplacian(g, x)).lambda2;
    if (l2 > top) {
      top = l2;
      best = x;
    }
    return true;
  });
  return top;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Algebraic-connectivity network design: exact and heuristic spanning-tree solvers"};
  app.require_subcommand(1);
  std::vector<std::string> command(argv, argv + argc);

  using Clock = std::chrono::steady_clock;
  std::function<void()> action;

  // exact
  InstanceFlags ex_in;
  SolveFlags ex_flags;
  Output ex_out;
  auto* ex = app.add_subcommand("exact", "Maximize λ2 over spanning trees");
  ex_in.attach(ex);
  ex_flags.attach(ex);
  ex_out.attach(ex, true);
  ex->callback([&] {
    action = [&] {
      const auto g = ex_in.load();
      const auto t0 = Clock::now();
      const auto r = solve_exact(g, ex_flags.config());
      const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
      if (!ex_out.trace.empty()) {
        std::ofstream tr(ex_out.trace);
        write_trace_csv(tr, r, {g.node_count()});
      }
      write_text(ex_out.report, make_report(command, g, ex_flags.to_json(), to_json(g, r), wall).dump(2) + "\n");
    };
  });

  // ub
  InstanceFlags ub_in;
  SolveFlags ub_flags;
  Output ub_out;
  std::string ub_sizes = "2,3,4";
  auto* ub = app.add_subcommand("ub", "Upper bounds from m×m principal-submatrix cuts, one run per m");
  ub_in.attach(ub);
  ub_flags.attach(ub);
  ub_out.attach(ub, true);
  ub->add_option("--sizes", ub_sizes, "Comma list of submatrix sizes");
  ub->callback([&] {
    action = [&] {
      const auto g = ub_in.load();
      const auto sizes = parse_sizes(ub_sizes);
      for (int m : sizes)
        if (m < 2 || m > g.node_count()) throw CLI::ValidationError("--sizes", "sizes must lie in [2, n]");
      const auto t0 = Clock::now();
      json runs = json::array();
      std::ofstream tr;
      if (!ub_out.trace.empty()) tr.open(ub_out.trace);
      const double cap = initial_upper_bound(g);
      for (int m : sizes) {
        OAConfig cfg = ub_flags.config();
        cfg.sizes = {m};
        const auto r = run_algorithm1(g, base_relaxed_model(g, g.node_count() - 1, cap), cfg);
        json j = to_json(g, r);
        j["m"] = m;
        runs.push_back(std::move(j));
        if (tr.is_open()) {
          tr << "# m=" << m << "\n";
          write_trace_csv(tr, r, {m});
        }
      }
      const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
      json params = ub_flags.to_json();
      params["sizes"] = sizes;
      write_text(ub_out.report, make_report(command, g, params, {{"runs", runs}}, wall).dump(2) + "\n");
    };
  });

  // dclbf
  InstanceFlags dc_in;
  SolveFlags dc_flags;
  Output dc_out;
  int dc_k = 0;
  auto* dc = app.add_subcommand("dclbf", "Lower bound from trees whose center has degree at least n−k");
  dc_in.attach(dc);
  dc_flags.attach(dc);
  dc_out.attach(dc, true);
  dc->add_option("--k", dc_k, "Degree parameter")->required()->check(CLI::PositiveNumber);
  dc->callback([&] {
    action = [&] {
      const auto g = dc_in.load();
      if (dc_k > g.node_count() - 1) throw CLI::ValidationError("--k", "k must be at most n-1");
      const auto t0 = Clock::now();
      OAConfig cfg = dc_flags.config();
      cfg.sizes = {g.node_count()};
      const auto r = run_algorithm1(g, dclbf_model(g, dc_k, initial_upper_bound(g)), cfg);
      const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
      if (!dc_out.trace.empty()) {
        std::ofstream tr(dc_out.trace);
        write_trace_csv(tr, r, {g.node_count()});
      }
      json params = dc_flags.to_json();
      params["k"] = dc_k;
      write_text(dc_out.report, make_report(command, g, params, to_json(g, r), wall).dump(2) + "\n");
    };
  });

  // mch
  InstanceFlags mh_in;
  SolveFlags mh_flags;
  Output mh_out;
  int mh_k = 0;
  int mh_d = 0;
  HeuristicParams mh_p;
  std::string mh_csv;
  auto* mh = app.add_subcommand("mch", "Maximum cost heuristic over the top-ranked centers");
  mh_in.attach(mh);
  mh_flags.attach(mh);
  mh_out.attach(mh, false);
  auto* k_opt = mh->add_option("--k", mh_k, "Center-degree parameter (center keeps n−k edges)")->check(CLI::PositiveNumber);
  auto* d_opt = mh->add_option("--d", mh_d, "Maximum node degree")->check(CLI::PositiveNumber);
  k_opt->excludes(d_opt);
  d_opt->excludes(k_opt);
  mh->add_option("--h1", mh_p.h1, "Number of center candidates")->check(CLI::PositiveNumber);
  mh->add_option("--h2", mh_p.h2, "Attachment candidates per leaf")->check(CLI::PositiveNumber);
  mh->add_option("--candidates", mh_csv, "Per-center CSV path");
  mh->callback([&] {
    if (mh_k == 0 && mh_d == 0) throw CLI::RequiredError("--k or --d");
    action = [&] {
      const auto g = mh_in.load();
      mh_p.mode = mh_k ? DegreeMode::dclbf : DegreeMode::capped;
      mh_p.degree = mh_k ? mh_k : mh_d;
      const auto t0 = Clock::now();
      const auto r = mh_k ? mch(g, mh_p, mh_flags.config()) : mch_degree_capped(g, mh_p, mh_flags.config());
      const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
      if (!mh_csv.empty()) {
        std::ofstream cs(mh_csv);
        write_candidates_csv(cs, r);
      }
      json params = mh_flags.to_json();
      params[mh_k ? "k" : "d"] = mh_p.degree;
      params["h1"] = mh_p.h1;
      params["h2"] = mh_p.h2;
      write_text(mh_out.report, make_report(command, g, params, to_json(g, r), wall).dump(2) + "\n");
    };
  });

  // robustness
  InstanceFlags rb_in;
  SolveFlags rb_flags;
  Output rb_out;
  NoiseModel rb_noise;
  int rb_random = 20;
  std::uint64_t rb_seed = 1;
  std::string rb_csv;
  auto* rb = app.add_subcommand("robustness", "Steady-state covariance norms of the optimal tree and reference topologies");
  rb_in.attach(rb);
  rb_flags.attach(rb);
  rb_out.attach(rb, false);
  rb->add_option("--c-ref", rb_noise.c_ref, "Absolute-measurement weight at the reference node")->check(CLI::PositiveNumber);
  rb->add_option("--ref", rb_noise.reference, "Reference node (1-based)")->check(CLI::PositiveNumber);
  rb->add_option("--random", rb_random, "Number of random trees")->check(CLI::NonNegativeNumber);
  rb->add_option("--seed", rb_seed, "Seed for the random trees");
  rb->add_option("--csv", rb_csv, "Report CSV path");
  rb->callback([&] {
    action = [&] {
      const auto g = rb_in.load();
      const auto t0 = Clock::now();
      const auto opt = solve_exact(g, rb_flags.config());
      const auto rep = compare_topologies(g, standard_candidates(g, opt.tree, rb_random, rb_seed), rb_noise);
      const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
      if (!rb_csv.empty()) {
        std::ofstream cs(rb_csv);
        write_report_csv(cs, rep);
      }
      json params = rb_flags.to_json();
      params["c_ref"] = rb_noise.c_ref;
      params["reference"] = rb_noise.reference;
      params["random"] = rb_random;
      params["seed"] = rb_seed;
      params["q"] = "identity";
      params["c"] = "edge weights";
      json result = to_json(rep);
      result["optimal"] = to_json(g, opt);
      write_text(rb_out.report, make_report(command, g, params, result, wall).dump(2) + "\n");
    };
  });

  // gen
  GeneratorOptions gen_opts;
  std::string gen_dir = ".";
  std::string gen_prefix = "inst";
  auto* gen = app.add_subcommand("gen", "Generate filtered random complete instances");
  gen->add_option("--n", gen_opts.n, "Nodes")->required()->check(CLI::Range(4, 64));
  gen->add_option("--count", gen_opts.count, "Instances to emit")->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", gen_opts.seed, "Base seed");
  gen->add_option("--lo", gen_opts.w_lo, "Smallest weight")->check(CLI::PositiveNumber);
  gen->add_option("--hi", gen_opts.w_hi, "Largest weight")->check(CLI::PositiveNumber);
  gen->add_option("--max-draws", gen_opts.max_draws_per_instance, "Draws allowed per emitted instance")->check(CLI::PositiveNumber);
  gen->add_option("--dir", gen_dir, "Output directory");
  gen->add_option("--prefix", gen_prefix, "File name prefix");
  gen->callback([&] {
    action = [&] {
      const auto list = generate_instances(gen_opts);
      std::filesystem::create_directories(gen_dir);
      for (std::size_t k = 0; k < list.size(); ++k) {
        const auto path = std::filesystem::path(gen_dir) / (gen_prefix + "_n" + std::to_string(gen_opts.n) + "_" + std::to_string(k + 1) + ".txt");
        write_instance(list[k].instance, path);
        std::cout << path.string() << " draw=" << list[k].draw << " best=" << list[k].best_lambda2
                  << " star=" << list[k].star_lambda2 << " maxw=" << list[k].max_weight_lambda2 << "\n";
      }
    };
  });

  // bruteforce
  InstanceFlags bf_in;
  Output bf_out;
  auto* bf = app.add_subcommand("bruteforce", "Enumerate every spanning tree (n ≤ 9)");
  bf_in.attach(bf);
  bf_out.attach(bf, false);
  bf->callback([&] {
    action = [&] {
      const auto g = bf_in.load();
      const auto t0 = Clock::now();
      EdgeSelection best;
      const double l2 = bruteforce_best(g, best);
      const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
      if (l2 < 0.0) throw std::runtime_error("graph has no spanning tree");
      write_text(bf_out.report, make_report(command, g, json::object(),
                                            {{"lambda2", l2}, {"tree", tree_json(g, best)}}, wall).dump(2) + "\n");
    };
  });

  // hist
  std::vector<std::string> hist_files;
  std::string hist_format = "plain";
  SolveFlags hist_flags;
  int hist_k = 0;
  auto* hist = app.add_subcommand("hist", "Degree histogram of optimal trees (or mch trees with --k)");
  hist->add_option("instances", hist_files, "Instance files")->required()->check(CLI::ExistingFile);
  hist->add_option("--format", hist_format, "plain or published")->check(CLI::IsMember({"plain", "published"}));
  hist->add_option("--k", hist_k, "Use mch(k, 5, 5) instead of the exact solve")->check(CLI::PositiveNumber);
  hist_flags.attach(hist);
  hist->callback([&] {
    action = [&] {
      std::vector<TreeOnGraph> trees;
      for (const auto& f : hist_files) {
        auto g = (hist_format == "published" ? read_published(f) : read_instance(f)).graph;
        EdgeSelection t;
        if (hist_k) {
          HeuristicParams p;
          p.degree = hist_k;
          p.h2 = std::min(5, g.node_count() - 1);
          t = mch(g, p, hist_flags.config()).tree;
        } else {
          t = solve_exact(g, hist_flags.config()).tree;
        }
        trees.push_back({std::move(g), std::move(t)});
      }
      std::cout << "degree,percent\n";
      std::cout.precision(6);
      for (const auto& [d, pct] : degree_histogram(trees)) std::cout << d << ',' << pct << '\n';
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    if (action) action();
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
