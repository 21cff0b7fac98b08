#pragma once

// Command-line front end. Kept in a header so tests can drive it in-process.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commkit/bench.hpp"
#include "commkit/divisive.hpp"
#include "commkit/evaluation.hpp"
#include "commkit/io.hpp"
#include "commkit/metrics.hpp"

namespace commkit::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_hard_cell_failed = 1,
  exit_input = 2,
  exit_algorithmic_stop = 3,
};

inline int exit_code_for(ErrorCode code) {
  return code == ErrorCode::KNotReached ? exit_algorithmic_stop : exit_input;
}

namespace detail {

struct InputOptions {
  std::string path;
  std::string format;
};

inline ParseResult load(const InputOptions& in) {
  std::optional<GraphFormat> fmt;
  if (!in.format.empty()) {
    fmt = parse_format_name(in.format);
    if (!fmt) throw Error(ErrorCode::UnsupportedFormat, "unknown format '" + in.format + "'");
  }
  if (!std::filesystem::is_regular_file(in.path)) throw Error(ErrorCode::DatasetMissing, "no such file: " + in.path);
  return read_graph_file(in.path, fmt);
}

inline MetricId metric_arg(const std::string& text) {
  auto m = parse_metric(text);
  if (!m) throw Error(ErrorCode::InvalidConfig, "unknown metric '" + text + "'");
  return *m;
}

inline RecomputePolicy policy_arg(const std::string& text) {
  if (text == "full") return RecomputePolicy::Full;
  if (text == "neighborhood") return RecomputePolicy::Neighborhood;
  throw Error(ErrorCode::InvalidConfig, "policy must be 'full' or 'neighborhood'");
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidConfig, "cannot write " + path);
  f << text;
}

inline void add_input(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("input", in.path, "Graph file (.gml, .net, or edge list)")->required();
  cmd->add_option("--format", in.format, "Input format: edgelist, gml, pajek (default: by extension)");
}

// ---- stats ---------------------------------------------------------------

struct StatsArgs {
  InputOptions in;
  std::string csv;
};

inline int run_stats(const StatsArgs& a, std::ostream& out, std::ostream& err) {
  const ParseResult parsed = load(a.in);
  for (const auto& w : parsed.diagnostics.warnings) err << "warning: " << w << "\n";
  const GraphStats s = graph_stats(parsed.graph);
  const std::vector<std::pair<std::string, std::string>> rows = {
      {"nodes", std::to_string(s.node_count)},
      {"edges", std::to_string(s.edge_count)},
      {"degree_avg", format_fixed(s.degree_avg, 3)},
      {"eigenvector_avg", format_fixed(s.eigenvector_avg, 3)},
      {"closeness_avg", format_fixed(s.closeness_avg, 3)},
      {"clustering_avg", format_fixed(s.clustering_coef_avg, 3)},
      {"betweenness_avg", format_fixed(s.betweenness_avg, 3)},
      {"avg_path_length", format_fixed(s.avg_path_length, 3)},
      {"connected", s.connected ? "yes" : "no"},
  };
  for (const auto& [k, v] : rows) {
    out << k << std::string(18 - k.size(), ' ') << v << "\n";
  }
  if (!a.csv.empty()) {
    std::string csv = "nodes,edges,degree_avg,eigenvector_avg,closeness_avg,clustering_avg,betweenness_avg,"
                      "avg_path_length,connected\n";
    csv += std::to_string(s.node_count) + "," + std::to_string(s.edge_count) + "," + format_fixed(s.degree_avg, 6) +
           "," + format_fixed(s.eigenvector_avg, 6) + "," + format_fixed(s.closeness_avg, 6) + "," +
           format_fixed(s.clustering_coef_avg, 6) + "," + format_fixed(s.betweenness_avg, 6) + "," +
           format_fixed(s.avg_path_length, 6) + "," + (s.connected ? "1" : "0") + "\n";
    write_output(a.csv, csv, out);
  }
  return exit_ok;
}

// ---- detect --------------------------------------------------------------

struct DetectArgs {
  InputOptions in;
  std::string metric;
  std::optional<std::size_t> k;
  bool all = false;
  std::string policy = "full";
  std::string out_partition;
  std::string out_dendrogram;
};

inline int run_detect(const DetectArgs& a, std::ostream& out, std::ostream& err) {
  const ParseResult parsed = load(a.in);
  const Graph& g = parsed.graph;
  if (!a.all && !a.k) throw Error(ErrorCode::InvalidConfig, "give --k <n> or --all");
  if (a.k && *a.k < 2) throw Error(ErrorCode::InvalidConfig, "--k must be at least 2");

  RunConfig cfg;
  cfg.metric = metric_arg(a.metric);
  cfg.policy = policy_arg(a.policy);
  if (!a.all) cfg.target_k = a.k;
  const Dendrogram d = run_divisive(g, cfg);

  // --all reports the best split found; --k the requested one, or the
  // furthest one reached when the run stopped early.
  std::size_t k = d.final_components();
  if (a.all) {
    k = max_modularity(modularity_sweep(g, d, d.final_components())).k;
  } else if (d.final_components() >= *a.k) {
    k = *a.k;
  }
  const Partition p = partition_at_k(d, k);
  if (!a.out_partition.empty()) write_output(a.out_partition, write_partition(p, g.labels()), out);
  if (!a.out_dendrogram.empty()) write_output(a.out_dendrogram, write_dendrogram(d), out);

  out << "k=" << p.community_count() << " Q=" << format_fixed(modularity(g, p), 6) << "\n";
  out << "stop=" << to_string(d.stop_reason) << "\n";
  if (d.stop_reason == StopReason::Deadlock) {
    err << "error: DeadlockStop: only pendant edges remain after " << d.removals.size() << " removal(s), "
        << d.final_components() << " communities reached\n";
    return exit_algorithmic_stop;
  }
  if (a.k && d.final_components() < *a.k) {
    err << "error: KNotReached: run ended at " << d.final_components() << " communities\n";
    return exit_algorithmic_stop;
  }
  return exit_ok;
}

// ---- sweep ---------------------------------------------------------------

struct SweepArgs {
  InputOptions in;
  std::string metric;
  std::size_t k_max = 10;
  std::string policy = "full";
  std::string out_path;
};

inline int run_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  if (a.k_max < 2) throw Error(ErrorCode::InvalidConfig, "--k-max must be at least 2");
  const ParseResult parsed = load(a.in);
  const Graph& g = parsed.graph;
  RunConfig cfg;
  cfg.metric = metric_arg(a.metric);
  cfg.policy = policy_arg(a.policy);
  cfg.target_k = std::min(a.k_max, g.node_count());
  const Dendrogram d = run_divisive(g, cfg);
  const ModularityCurve curve = modularity_sweep(g, d, a.k_max);

  std::string text = write_curve(curve);
  if (!curve.points.empty()) {
    const auto best = max_modularity(curve, false);
    text += "# max k=" + std::to_string(best.k) + " q=" + format_fixed(best.q, 6) + "\n";
  }
  for (std::size_t w : elbow_windows) {
    if (curve.points.size() < 2) {
      text += "# elbow w=" + std::to_string(w) + " insufficient curve\n";
      continue;
    }
    const auto e = elbow_select(curve, w);
    text += "# elbow w=" + std::to_string(w) + " k=" + std::to_string(e.k) + " q=" + format_fixed(e.q, 6) + "\n";
  }
  write_output(a.out_path, text, out);
  if (d.stop_reason == StopReason::Deadlock) {
    err << "error: DeadlockStop after " << d.final_components() << " communities\n";
    return exit_algorithmic_stop;
  }
  return exit_ok;
}

// ---- compare -------------------------------------------------------------

struct CompareArgs {
  InputOptions in;
  std::vector<std::string> metrics;
  std::size_t k = 0;
  std::string reference;
  std::string network;
  std::string out_path;
};

inline int run_compare(const CompareArgs& a, std::ostream& out, std::ostream& err) {
  if (a.k < 2) throw Error(ErrorCode::InvalidConfig, "--k must be at least 2");
  const std::string bytes = read_file(a.in.path);
  std::optional<GraphFormat> fmt = format_from_path(a.in.path);
  if (!a.in.format.empty()) {
    fmt = parse_format_name(a.in.format);
    if (!fmt) throw Error(ErrorCode::UnsupportedFormat, "unknown format '" + a.in.format + "'");
  }
  const ParseResult parsed = parse_graph(bytes, *fmt);
  const Graph& g = parsed.graph;

  std::vector<MetricId> metrics;
  for (const auto& m : a.metrics) metrics.push_back(metric_arg(m));
  std::sort(metrics.begin(), metrics.end());
  metrics.erase(std::unique(metrics.begin(), metrics.end()), metrics.end());

  auto detect = [&](MetricId m) -> std::optional<Partition> {
    RunConfig cfg;
    cfg.metric = m;
    cfg.target_k = a.k;
    const Dendrogram d = run_divisive(g, cfg);
    if (d.final_components() < a.k) return std::nullopt;
    return partition_at_k(d, a.k);
  };

  Partition reference;
  if (a.reference.rfind("run:", 0) == 0) {
    const MetricId m = metric_arg(a.reference.substr(4));
    auto p = detect(m);
    if (!p) throw Error(ErrorCode::KNotReached, "reference run " + std::string(metric_name(m)) +
                                                     " does not reach k=" + std::to_string(a.k));
    reference = *p;
  } else {
    reference = read_partition(read_file(a.reference), g);
  }

  ExperimentReport report;
  report.network = a.network.empty() ? std::filesystem::path(a.in.path).stem().string() : a.network;
  report.provenance.input_sha256 = sha256_hex(bytes);
  std::string names;
  for (MetricId m : metrics) names += (names.empty() ? "" : "|") + std::string(metric_name(m));
  report.provenance.config = "metrics=" + names + ";k=" + std::to_string(a.k) + ";reference=" + a.reference +
                             ";policy=full";
  int code = exit_ok;
  for (MetricId m : metrics) {
    auto p = detect(m);
    if (!p) {
      err << "error: " << metric_name(m) << " does not reach k=" << a.k << "\n";
      code = exit_algorithmic_stop;
      continue;
    }
    report.rows.push_back({m, a.k, modularity(g, *p), nmi(*p, reference)});
  }
  write_output(a.out_path, write_report(report), out);
  return code;
}

// ---- reproduce -----------------------------------------------------------

struct ReproduceArgs {
  std::string dataset_dir;
  std::string out_dir = "commkit-reproduce";
  std::vector<std::string> networks;
  std::size_t k_max = 10;
  bool quiet = false;
};

inline int run_reproduce(const ReproduceArgs& a, std::ostream& out, std::ostream& err) {
  ReproduceOptions opt;
  std::string dir = a.dataset_dir;
  if (dir.empty())
    if (const char* env = std::getenv("COMMKIT_DATASET_DIR")) dir = env;
  if (dir.empty()) throw Error(ErrorCode::DatasetMissing, "no --dataset-dir given and COMMKIT_DATASET_DIR unset");
  opt.dataset_dir = dir;
  opt.out_dir = a.out_dir;
  opt.networks = a.networks;
  opt.k_max = a.k_max;

  const ReproduceResult r = reproduce(opt);
  std::size_t pass = 0, fail = 0, soft = 0;
  for (const auto& c : r.cells) {
    switch (c.status) {
    case CellStatus::Pass: ++pass; break;
    case CellStatus::Soft: ++soft; break;
    default: ++fail; break;
    }
    if (a.quiet && c.status == CellStatus::Soft) continue;
    out << to_string(c.status) << " " << c.table << " " << c.network << " " << c.column
        << " expected=" << format_fixed(c.expected, 3)
        << " actual=" << (c.actual ? format_fixed(*c.actual, 3) : std::string("-")) << "\n";
  }
  out << "summary: " << pass << " hard passed, " << fail << " hard failed, " << soft << " soft (informational)\n";
  err << "reproduce: " << r.networks.size() << " network(s) in " << format_fixed(r.elapsed_seconds, 2) << " s, tables in "
      << a.out_dir << "\n";
  return r.hard_failure() ? exit_hard_cell_failed : exit_ok;
}

} // namespace detail

/// Parses `argv`, runs the chosen subcommand and returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"commkit: divisive community detection with edge-scoring metrics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(toolkit_version));

  detail::StatsArgs stats;
  auto* c_stats = app.add_subcommand("stats", "Print network statistics");
  detail::add_input(c_stats, stats.in);
  c_stats->add_option("--csv", stats.csv, "Also write the statistics as CSV to this path ('-' for stdout)");

  detail::DetectArgs detect;
  auto* c_detect = app.add_subcommand("detect", "Run divisive detection and write the partition");
  detail::add_input(c_detect, detect.in);
  c_detect->add_option("--metric", detect.metric, "Edge metric (name or code, e.g. betweenness, ja)")->required();
  auto* k_opt = c_detect->add_option("--k", detect.k, "Target community count (>= 2)");
  auto* all_opt = c_detect->add_flag("--all", detect.all, "Run to completion and keep the best-modularity split");
  k_opt->excludes(all_opt);
  c_detect->add_option("--policy", detect.policy, "Recompute policy: full or neighborhood");
  c_detect->add_option("--out-partition", detect.out_partition, "Write partition CSV");
  c_detect->add_option("--out-dendrogram", detect.out_dendrogram, "Write dendrogram JSON");

  detail::SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Modularity for k = 2..k-max with elbow picks");
  detail::add_input(c_sweep, sweep.in);
  c_sweep->add_option("--metric", sweep.metric, "Edge metric")->required();
  c_sweep->add_option("--k-max", sweep.k_max, "Largest community count (default 10)");
  c_sweep->add_option("--policy", sweep.policy, "Recompute policy: full or neighborhood");
  c_sweep->add_option("--out", sweep.out_path, "Write the curve CSV here instead of stdout");

  detail::CompareArgs compare;
  auto* c_compare = app.add_subcommand("compare", "Modularity and NMI of several metrics at one k");
  detail::add_input(c_compare, compare.in);
  c_compare->add_option("--metrics", compare.metrics, "Comma-separated metrics")->required()->delimiter(',');
  c_compare->add_option("--k", compare.k, "Community count")->required();
  c_compare->add_option("--reference", compare.reference, "Partition CSV path or run:<metric>")->required();
  c_compare->add_option("--network", compare.network, "Network name for the report (default: file stem)");
  c_compare->add_option("--out", compare.out_path, "Write the report here instead of stdout");

  detail::ReproduceArgs repro;
  auto* c_repro = app.add_subcommand("reproduce", "Regenerate all tables over the benchmark networks");
  c_repro->add_option("--dataset-dir", repro.dataset_dir, "Directory with the .gml files (default $COMMKIT_DATASET_DIR)");
  c_repro->add_option("--out", repro.out_dir, "Output directory");
  c_repro->add_option("--networks", repro.networks, "Subset of networks, comma-separated")->delimiter(',');
  c_repro->add_option("--k-max", repro.k_max, "Largest community count (default 10)");
  c_repro->add_flag("--quiet", repro.quiet, "Only print hard cells");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    if (*c_stats) return detail::run_stats(stats, out, err);
    if (*c_detect) return detail::run_detect(detect, out, err);
    if (*c_sweep) return detail::run_sweep(sweep, out, err);
    if (*c_compare) return detail::run_compare(compare, out, err);
    if (*c_repro) return detail::run_reproduce(repro, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}

} // namespace commkit::cli
