#include "kmpso/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "kmpso/error.hpp"

namespace kmpso {
namespace {

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string general(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct FoldTask {
  std::size_t repeat;
  std::size_t fold;
  const FoldPlan* plan;
};

FoldResult run_fold(const ExperimentConfig& config, const RawTable& table, const FoldTask& task,
                    const ExperimentHooks& hooks) {
  const auto train_rows = task.plan->train_rows(task.fold);
  const auto test_rows = task.plan->test_rows(task.fold);

  const RawTable complete = impute_missing(table, column_means(table, train_rows));
  const Dataset train = make_dataset(complete, train_rows);
  const Dataset test = make_dataset(complete, test_rows, train.attribute_stats);

  const Topology topology{table.cols(), config.hidden, table.n_classes()};
  Objective objective = mse_objective(topology, train);
  if (hooks.on_fitness) {
    objective = [&, inner = std::move(objective)](std::span<const double> position) {
      hooks.on_fitness(task.repeat, task.fold, train);
      return inner(position);
    };
  }

  Rng rng{config.seed, task.repeat, task.fold + 1};
  const RunResult run = kmpso::run(config.swarm, dimension(topology), objective, rng);
  const Ensemble ensemble = build_ensemble(run.swarm, run.clusters, topology);

  FoldResult r;
  r.repeat = task.repeat;
  r.fold = task.fold;
  r.train_size = train.size();
  r.test_size = test.size();
  r.train_error = error_rate(ensemble, train);
  r.test_error = error_rate(ensemble, test);
  r.best_fitness = run.swarm.particles[global_best(run.swarm.particles)].pbest_fitness;
  r.train_decomposition = decompose(ensemble, train);
  r.test_decomposition = decompose(ensemble, test);
  return r;
}

[[noreturn]] void rethrow_tagged(std::exception_ptr error, const FoldTask& task) {
  const std::string tag =
      "repeat " + std::to_string(task.repeat) + ", fold " + std::to_string(task.fold) + ": ";
  try {
    std::rethrow_exception(error);
  } catch (const DataError& e) {
    throw DataError(tag + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(tag + e.what());
  } catch (const std::exception& e) {
    throw Error(tag + e.what());
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (folds < 2) throw ConfigError("folds must be at least 2");
  if (repeats < 1) throw ConfigError("repeats must be at least 1");
  if (hidden < 1) throw ConfigError("hidden layer needs at least one unit");
  swarm.validate();
}

Aggregate aggregate(std::span<const double> values) {
  if (values.empty()) throw ContractError("aggregate: no values");
  Aggregate a;
  a.min = *std::min_element(values.begin(), values.end());
  a.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - a.mean) * (v - a.mean);
  a.sd = std::sqrt(ss / static_cast<double>(values.size()));
  // Rounding in the mean can leave it a hair outside [min, max].
  a.mean = std::clamp(a.mean, a.min, a.max);
  return a;
}

ResultsSummary run_cv_experiment(const ExperimentConfig& config, const RawTable& table,
                                 const ExperimentHooks& hooks) {
  config.validate();
  if (table.n_classes() < 2) throw DataError("data set needs at least two classes");
  const auto start = std::chrono::steady_clock::now();

  std::vector<FoldPlan> plans;
  plans.reserve(config.repeats);
  for (std::size_t r = 0; r < config.repeats; ++r) {
    Rng split_rng{config.seed, r};
    plans.push_back(kfold_split(table.rows(), config.folds, split_rng));
  }
  std::vector<FoldTask> tasks;
  for (std::size_t r = 0; r < config.repeats; ++r) {
    for (std::size_t f = 0; f < config.folds; ++f) tasks.push_back({r, f, &plans[r]});
  }

  std::vector<FoldResult> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = run_fold(config, table, tasks[i], hooks);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t threads = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  threads = std::clamp<std::size_t>(threads, 1, tasks.size());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (errors[i]) rethrow_tagged(errors[i], tasks[i]);
  }

  ResultsSummary summary;
  summary.folds = std::move(results);
  summary.seed = config.seed;
  std::vector<double> train;
  std::vector<double> test;
  for (const auto& f : summary.folds) {
    train.push_back(f.train_error);
    test.push_back(f.test_error);
  }
  summary.train = aggregate(train);
  summary.test = aggregate(test);
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

ResultsSummary run_cv_experiment(const ExperimentConfig& config) {
  config.validate();
  return run_cv_experiment(config, load_csv(config.data_path, config.schema));
}

std::string report(const ResultsSummary& summary, ReportFormat format) {
  const std::pair<const char*, double Aggregate::*> rows[] = {
      {"Mean", &Aggregate::mean}, {"SD", &Aggregate::sd}, {"Min", &Aggregate::min},
      {"Max", &Aggregate::max}};
  std::string out;
  if (format == ReportFormat::markdown) {
    out += "| | Training error | Testing error |\n";
    out += "|---|---:|---:|\n";
    for (const auto& [name, field] : rows) {
      out += "| " + std::string(name) + " | " + fixed3(summary.train.*field) + " | " +
             fixed3(summary.test.*field) + " |\n";
    }
    return out;
  }
  out += "row,repeat,fold,train_error,test_error\n";
  for (const auto& f : summary.folds) {
    out += "fold," + std::to_string(f.repeat) + "," + std::to_string(f.fold) + "," +
           fixed3(f.train_error) + "," + fixed3(f.test_error) + "\n";
  }
  for (const auto& [name, field] : rows) {
    std::string label(name);
    std::transform(label.begin(), label.end(), label.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    out += label + ",,," + fixed3(summary.train.*field) + "," + fixed3(summary.test.*field) +
           "\n";
  }
  return out;
}

std::string decomposition_report(const ResultsSummary& summary, ReportFormat format) {
  std::string out;
  const bool md = format == ReportFormat::markdown;
  out += md ? "| Repeat | Fold | Split | E | E_bar | D_bar | E_bar - D_bar |\n"
              "|---:|---:|---|---:|---:|---:|---:|\n"
            : "repeat,fold,split,E,E_bar,D_bar,E_bar_minus_D_bar\n";
  for (const auto& f : summary.folds) {
    for (const auto& [split, d] :
         {std::pair{"train", &f.train_decomposition}, std::pair{"test", &f.test_decomposition}}) {
      const std::string cells[] = {std::to_string(f.repeat),
                                   std::to_string(f.fold),
                                   split,
                                   general(d->ensemble_error),
                                   general(d->mean_error),
                                   general(d->mean_ambiguity),
                                   general(d->mean_error - d->mean_ambiguity)};
      std::string line;
      for (const auto& c : cells) line += md ? "| " + c + " " : (line.empty() ? "" : ",") + c;
      out += md ? line + "|\n" : line + "\n";
    }
  }
  return out;
}

}  // namespace kmpso
