#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "kmpso/error.hpp"
#include "kmpso/experiment.hpp"

namespace kmpso::cli {
namespace {

struct Options {
  std::string data;
  std::string schema;
  std::optional<std::size_t> class_col;
  std::optional<std::string> delimiter;
  std::optional<std::string> missing;
  std::optional<double> pos_bound;
  std::string mode = "kmpso";
  std::string format = "md";
};

void add_options(CLI::App& app, Options& o, ExperimentConfig& c) {
  app.set_config("--config", "", "key = value file mirroring the long flags; flags win");
  app.add_option("--data", o.data, "delimited data file")->required();
  app.add_option("--schema", o.schema, "schema file (key = value)");
  app.add_option("--class-col", o.class_col, "0-based class column (default: last)");
  app.add_option("--delimiter", o.delimiter, "field separator, or 'whitespace'");
  app.add_option("--missing", o.missing, "missing-value marker (default ?)");
  app.add_option("--folds", c.folds, "cross-validation folds")->capture_default_str();
  app.add_option("--repeats", c.repeats, "repetitions of the whole CV")->capture_default_str();
  app.add_option("--pop", c.swarm.population, "swarm size M")->capture_default_str();
  app.add_option("--iters", c.swarm.iterations, "iterations T")->capture_default_str();
  app.add_option("--clusters", c.swarm.clusters, "k-means clusters k")->capture_default_str();
  app.add_option("--hidden", c.hidden, "hidden units q")->capture_default_str();
  app.add_option("--c1", c.swarm.c1, "cognitive coefficient")->capture_default_str();
  app.add_option("--c2", c.swarm.c2, "social coefficient")->capture_default_str();
  app.add_option("--w-start", c.swarm.w_start, "initial inertia")->capture_default_str();
  app.add_option("--w-end", c.swarm.w_end, "final inertia")->capture_default_str();
  app.add_option("--pos-bound", o.pos_bound, "positions limited to [-b, b] (default 5)");
  app.add_option("--v-max", c.swarm.v_max, "velocity limit")->capture_default_str();
  app.add_option("--seed", c.seed, "master seed")->capture_default_str();
  app.add_option("--mode", o.mode, "kmpso or gbest")
      ->check(CLI::IsMember({"kmpso", "gbest"}))
      ->capture_default_str();
  app.add_option("--out", c.out_path, "write the report here instead of stdout");
  app.add_option("--format", o.format, "md or csv")
      ->check(CLI::IsMember({"md", "csv"}))
      ->capture_default_str();
  app.add_option("--threads", c.threads, "fold worker threads, 0 = all cores")
      ->capture_default_str();
}

ExperimentConfig finish(const Options& o, ExperimentConfig c) {
  c.data_path = o.data;
  if (!o.schema.empty()) c.schema = load_schema(o.schema);
  if (o.class_col) c.schema.class_col = *o.class_col;
  if (o.delimiter) set_schema_value(c.schema, "delimiter", *o.delimiter);
  if (o.missing) c.schema.missing = *o.missing;
  if (o.pos_bound) {
    c.swarm.pos_min = -*o.pos_bound;
    c.swarm.pos_max = *o.pos_bound;
  }
  c.swarm.mode = o.mode == "gbest" ? SwarmMode::global_best : SwarmMode::kmpso;
  c.format = o.format == "csv" ? ReportFormat::csv : ReportFormat::markdown;
  return c;
}

int emit(const std::string& text, const ExperimentConfig& c, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return kSuccess;
  }
  std::ofstream file(c.out_path, std::ios::binary);
  if (!file || !(file << text)) throw Error("cannot write '" + c.out_path + "'");
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neural network ensembles trained by k-means multi-subpopulation PSO"};
  app.require_subcommand(1);
  Options options;
  ExperimentConfig config;
  add_options(app, options, config);
  auto* train = app.add_subcommand("train", "cross-validate and report error statistics");
  auto* decompose = app.add_subcommand("decompose", "print E, E_bar and D_bar per fold");
  train->fallthrough();
  decompose->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  try {
    const ExperimentConfig c = finish(options, config);
    const ResultsSummary summary = run_cv_experiment(c);
    err << "seed " << summary.seed << ", wall-clock " << summary.wall_seconds << " s\n";
    if (*train) return emit(report(summary, c.format), c, out);
    return emit(decomposition_report(summary, c.format), c, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}

}  // namespace kmpso::cli
