#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "kmpso/clustering.hpp"
#include "kmpso/data.hpp"
#include "kmpso/network.hpp"
#include "kmpso/rng.hpp"

namespace kmpso {

enum class SwarmMode {
  kmpso,        // social term pulls towards the best pbest of the particle's cluster
  global_best,  // canonical PSO: social term pulls towards the swarm-wide best pbest
};

struct SwarmConfig {
  std::size_t population = 250;
  std::size_t iterations = 150;
  double c1 = 2.0;
  double c2 = 2.0;
  double w_start = 0.9;
  double w_end = 0.2;
  std::size_t clusters = 10;
  double pos_min = -5.0;
  double pos_max = 5.0;
  double v_max = 5.0;
  SwarmMode mode = SwarmMode::kmpso;
  std::size_t kmeans_max_iters = 100;

  /// Throws ConfigError when population >= clusters >= 1, iterations >= 1,
  /// pos_min < pos_max or v_max > 0 does not hold.
  void validate() const;
};

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> pbest_position;
  double fitness = 0.0;
  double pbest_fitness = 0.0;
  std::size_t cluster_label = 0;
};

/// Fitness to minimize, evaluated on a flat position vector.
using Objective = std::function<double(std::span<const double>)>;

/// Mean squared error of the network encoded by a position. The dataset is
/// captured by reference and must outlive the objective.
Objective mse_objective(const Topology& topology, const Dataset& data);

struct Swarm {
  std::vector<Particle> particles;
  std::size_t iteration = 0;
  SwarmConfig config;
  std::size_t dimension = 0;
  /// Latest clustering of the pbests; empty (k() == 0) before the first step.
  ClusterAssignment clusters;
};

/// Random positions in [pos_min, pos_max] and velocities in [-v_max, v_max],
/// drawn particle by particle (all position components, then all velocity
/// components). pbest starts at the initial position.
Swarm initialize_swarm(const SwarmConfig& config, std::size_t dimension,
                       const Objective& objective, Rng& rng);
Swarm initialize_swarm(const SwarmConfig& config, const Topology& topology,
                       const Dataset& data, Rng& rng);

/// Linearly annealed inertia weight for iteration t of T.
double inertia(std::size_t t, std::size_t T, double w_start, double w_end);

struct VelocityParams {
  double w = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double v_max = 0.0;
};

/// v = w v + c1 r1 (pbest - x) + c2 r2 (attractor - x), clamped to
/// [-v_max, v_max], with r1 then r2 drawn for each component in turn.
void update_velocity(Particle& particle, std::span<const double> attractor,
                     const VelocityParams& params, Rng& rng);

/// Same update with caller-supplied random factors.
void update_velocity(Particle& particle, std::span<const double> attractor,
                     const VelocityParams& params, std::span<const double> r1,
                     std::span<const double> r2);

/// x = clamp(x + v, pos_min, pos_max). The velocity is left untouched.
void update_position(Particle& particle, double pos_min, double pos_max);

Matrix pbest_matrix(const Swarm& swarm);

/// k-means over the pbests, warm-started from swarm.clusters when present.
ClusterAssignment cluster_pbests(const Swarm& swarm, Rng& rng);

/// Index of the lowest-pbest_fitness particle in every cluster (ties to the
/// lowest particle index). Throws ContractError for an empty cluster.
std::vector<std::size_t> cluster_champions(std::span<const Particle> particles,
                                           const ClusterAssignment& clusters);

/// Index of the lowest-pbest_fitness particle of the swarm.
std::size_t global_best(std::span<const Particle> particles);

/// One iteration: cluster the pbests, move every particle towards its
/// attractor, re-evaluate, and keep strictly better positions as pbest.
void step(Swarm& swarm, const Objective& objective, Rng& rng);

struct RunResult {
  Swarm swarm;
  ClusterAssignment clusters;  // final clustering after the last step
};

using StepObserver = std::function<void(const Swarm&)>;

RunResult run(const SwarmConfig& config, std::size_t dimension, const Objective& objective,
              Rng& rng, const StepObserver& observer = {});
RunResult run(const SwarmConfig& config, const Topology& topology, const Dataset& data,
              Rng& rng, const StepObserver& observer = {});

}  // namespace kmpso
