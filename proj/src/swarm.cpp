#include "kmpso/swarm.hpp"

#include <algorithm>
#include <string>

#include "kmpso/error.hpp"

namespace kmpso {

void SwarmConfig::validate() const {
  if (clusters < 1) throw ConfigError("number of clusters must be at least 1");
  if (population < clusters) {
    throw ConfigError("population (" + std::to_string(population) +
                      ") must be at least the number of clusters (" +
                      std::to_string(clusters) + ")");
  }
  if (iterations < 1) throw ConfigError("iterations must be at least 1");
  if (!(pos_min < pos_max)) throw ConfigError("position bounds must satisfy min < max");
  if (!(v_max > 0.0)) throw ConfigError("v_max must be positive");
  if (kmeans_max_iters < 1) throw ConfigError("kmeans_max_iters must be at least 1");
}

Objective mse_objective(const Topology& topology, const Dataset& data) {
  return [&data, topology](std::span<const double> position) {
    return mse_fitness(position, topology, data);
  };
}

Swarm initialize_swarm(const SwarmConfig& config, std::size_t dimension,
                       const Objective& objective, Rng& rng) {
  config.validate();
  if (dimension == 0) throw ConfigError("search space dimension must be positive");
  Swarm swarm;
  swarm.config = config;
  swarm.dimension = dimension;
  swarm.particles.resize(config.population);
  for (auto& p : swarm.particles) {
    p.position.resize(dimension);
    p.velocity.resize(dimension);
    for (double& x : p.position) x = rng.uniform(config.pos_min, config.pos_max);
    for (double& v : p.velocity) v = rng.uniform(-config.v_max, config.v_max);
  }
  for (auto& p : swarm.particles) {
    p.fitness = objective(p.position);
    p.pbest_position = p.position;
    p.pbest_fitness = p.fitness;
  }
  return swarm;
}

Swarm initialize_swarm(const SwarmConfig& config, const Topology& topology,
                       const Dataset& data, Rng& rng) {
  validate(topology);
  if (data.size() == 0) throw DataError("cannot optimize on an empty dataset");
  return initialize_swarm(config, dimension(topology), mse_objective(topology, data), rng);
}

double inertia(std::size_t t, std::size_t T, double w_start, double w_end) {
  if (T == 0 || t >= T) {
    throw ContractError("inertia: iteration " + std::to_string(t) + " outside [0, " +
                        std::to_string(T) + ")");
  }
  if (T == 1) return w_start;
  return w_start - (w_start - w_end) * static_cast<double>(t) / static_cast<double>(T - 1);
}

void update_velocity(Particle& particle, std::span<const double> attractor,
                     const VelocityParams& params, std::span<const double> r1,
                     std::span<const double> r2) {
  const std::size_t d = particle.position.size();
  if (attractor.size() != d || particle.velocity.size() != d ||
      particle.pbest_position.size() != d || r1.size() != d || r2.size() != d) {
    throw ContractError("update_velocity: dimension mismatch");
  }
  for (std::size_t i = 0; i < d; ++i) {
    const double x = particle.position[i];
    const double v = params.w * particle.velocity[i] +
                     params.c1 * r1[i] * (particle.pbest_position[i] - x) +
                     params.c2 * r2[i] * (attractor[i] - x);
    particle.velocity[i] = std::clamp(v, -params.v_max, params.v_max);
  }
}

void update_velocity(Particle& particle, std::span<const double> attractor,
                     const VelocityParams& params, Rng& rng) {
  const std::size_t d = particle.position.size();
  std::vector<double> r1(d);
  std::vector<double> r2(d);
  for (std::size_t i = 0; i < d; ++i) {
    r1[i] = rng.uniform01();
    r2[i] = rng.uniform01();
  }
  update_velocity(particle, attractor, params, r1, r2);
}

void update_position(Particle& particle, double pos_min, double pos_max) {
  if (particle.velocity.size() != particle.position.size()) {
    throw ContractError("update_position: dimension mismatch");
  }
  for (std::size_t i = 0; i < particle.position.size(); ++i) {
    particle.position[i] = std::clamp(particle.position[i] + particle.velocity[i], pos_min, pos_max);
  }
}

Matrix pbest_matrix(const Swarm& swarm) {
  Matrix m(swarm.particles.size(), swarm.dimension);
  for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
    std::copy(swarm.particles[i].pbest_position.begin(),
              swarm.particles[i].pbest_position.end(), m.row(i).begin());
  }
  return m;
}

ClusterAssignment cluster_pbests(const Swarm& swarm, Rng& rng) {
  const Matrix points = pbest_matrix(swarm);
  const Matrix* seeds = swarm.clusters.k() > 0 ? &swarm.clusters.centroids : nullptr;
  return kmeans(points, swarm.config.clusters, rng, seeds, swarm.config.kmeans_max_iters);
}

std::vector<std::size_t> cluster_champions(std::span<const Particle> particles,
                                           const ClusterAssignment& clusters) {
  if (clusters.labels.size() != particles.size()) {
    throw ContractError("cluster_champions: labels do not cover the swarm");
  }
  const std::size_t none = particles.size();
  std::vector<std::size_t> best(clusters.k(), none);
  for (std::size_t i = 0; i < particles.size(); ++i) {
    std::size_t& b = best[clusters.labels[i]];
    if (b == none || particles[i].pbest_fitness < particles[b].pbest_fitness) b = i;
  }
  for (std::size_t c = 0; c < best.size(); ++c) {
    if (best[c] == none) throw ContractError("cluster " + std::to_string(c) + " is empty");
  }
  return best;
}

std::size_t global_best(std::span<const Particle> particles) {
  if (particles.empty()) throw ContractError("global_best: empty swarm");
  std::size_t best = 0;
  for (std::size_t i = 1; i < particles.size(); ++i) {
    if (particles[i].pbest_fitness < particles[best].pbest_fitness) best = i;
  }
  return best;
}

void step(Swarm& swarm, const Objective& objective, Rng& rng) {
  const SwarmConfig& cfg = swarm.config;
  if (swarm.iteration >= cfg.iterations) {
    throw ContractError("step: swarm already ran " + std::to_string(cfg.iterations) +
                        " iterations");
  }
  auto& particles = swarm.particles;

  swarm.clusters = cluster_pbests(swarm, rng);
  for (std::size_t i = 0; i < particles.size(); ++i) {
    particles[i].cluster_label = swarm.clusters.labels[i];
  }

  std::vector<std::size_t> attractor(particles.size());
  if (cfg.mode == SwarmMode::kmpso) {
    const auto champions = cluster_champions(particles, swarm.clusters);
    for (std::size_t i = 0; i < particles.size(); ++i) {
      attractor[i] = champions[particles[i].cluster_label];
    }
  } else {
    std::fill(attractor.begin(), attractor.end(), global_best(particles));
  }
  // Attractors are pbests, which stay fixed until every particle has moved.
  std::vector<std::vector<double>> targets(particles.size());
  for (std::size_t i = 0; i < particles.size(); ++i) {
    targets[i] = particles[attractor[i]].pbest_position;
  }

  const VelocityParams params{inertia(swarm.iteration, cfg.iterations, cfg.w_start, cfg.w_end),
                              cfg.c1, cfg.c2, cfg.v_max};
  for (std::size_t i = 0; i < particles.size(); ++i) {
    update_velocity(particles[i], targets[i], params, rng);
    update_position(particles[i], cfg.pos_min, cfg.pos_max);
  }
  for (auto& p : particles) {
    p.fitness = objective(p.position);
    if (p.fitness < p.pbest_fitness) {
      p.pbest_fitness = p.fitness;
      p.pbest_position = p.position;
    }
  }
  ++swarm.iteration;
}

RunResult run(const SwarmConfig& config, std::size_t dimension, const Objective& objective,
              Rng& rng, const StepObserver& observer) {
  RunResult result{initialize_swarm(config, dimension, objective, rng), {}};
  Swarm& swarm = result.swarm;
  while (swarm.iteration < config.iterations) {
    step(swarm, objective, rng);
    if (observer) observer(swarm);
  }
  swarm.clusters = cluster_pbests(swarm, rng);
  for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
    swarm.particles[i].cluster_label = swarm.clusters.labels[i];
  }
  result.clusters = swarm.clusters;
  return result;
}

RunResult run(const SwarmConfig& config, const Topology& topology, const Dataset& data,
              Rng& rng, const StepObserver& observer) {
  validate(topology);
  if (data.size() == 0) throw DataError("cannot optimize on an empty dataset");
  return run(config, dimension(topology), mse_objective(topology, data), rng, observer);
}

}  // namespace kmpso
