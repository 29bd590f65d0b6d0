#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kmpso/data.hpp"
#include "kmpso/ensemble.hpp"
#include "kmpso/swarm.hpp"

namespace kmpso {

enum class ReportFormat { markdown, csv };

struct ExperimentConfig {
  std::string data_path;
  Schema schema;
  std::size_t folds = 10;
  std::size_t repeats = 1;
  SwarmConfig swarm;
  std::size_t hidden = 7;
  std::uint64_t seed = 1;
  std::string out_path;
  ReportFormat format = ReportFormat::markdown;
  /// Worker threads for independent folds; 0 uses every hardware thread.
  /// Results do not depend on this value.
  std::size_t threads = 1;

  void validate() const;
};

struct FoldResult {
  std::size_t repeat = 0;
  std::size_t fold = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  double train_error = 0.0;
  double test_error = 0.0;
  double best_fitness = 0.0;  // lowest training MSE in the final swarm
  Decomposition train_decomposition;
  Decomposition test_decomposition;
};

struct Aggregate {
  double mean = 0.0;
  double sd = 0.0;  // population standard deviation
  double min = 0.0;
  double max = 0.0;
};

Aggregate aggregate(std::span<const double> values);

struct ResultsSummary {
  std::vector<FoldResult> folds;  // ordered by (repeat, fold)
  Aggregate train;
  Aggregate test;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
};

struct ExperimentHooks {
  /// Called on every fitness evaluation with the dataset the optimizer reads.
  /// May be called from several threads when config.threads > 1.
  std::function<void(std::size_t repeat, std::size_t fold, const Dataset& data)> on_fitness;
};

/// Cross-validated KMPSO runs over an already loaded table. Imputation and
/// normalization statistics come from each training partition only.
ResultsSummary run_cv_experiment(const ExperimentConfig& config, const RawTable& table,
                                 const ExperimentHooks& hooks = {});

/// Loads config.data_path with config.schema, then runs the experiment.
ResultsSummary run_cv_experiment(const ExperimentConfig& config);

/// Mean/SD/Min/Max of training and testing error, three decimals.
std::string report(const ResultsSummary& summary, ReportFormat format);

/// Per-fold E, mean component error and mean ambiguity on both partitions.
std::string decomposition_report(const ResultsSummary& summary, ReportFormat format);

}  // namespace kmpso
