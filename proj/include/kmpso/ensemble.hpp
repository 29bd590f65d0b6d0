#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kmpso/clustering.hpp"
#include "kmpso/data.hpp"
#include "kmpso/network.hpp"
#include "kmpso/swarm.hpp"

namespace kmpso {

/// Weighted average of component networks sharing one topology.
struct Ensemble {
  Topology topology;
  std::vector<std::vector<double>> components;
  std::vector<double> weights;  // non-negative, sum to 1

  std::size_t size() const noexcept { return components.size(); }
};

/// Equal-weight ensemble of the given positions.
Ensemble make_ensemble(const Topology& topology, std::vector<std::vector<double>> components);

/// One component per cluster: the pbest of the cluster's best particle.
Ensemble build_ensemble(const Swarm& swarm, const ClusterAssignment& clusters,
                        const Topology& topology);

std::vector<double> predict(const Ensemble& ensemble, std::span<const double> input);

/// Index of the largest value, first one on ties.
std::size_t argmax(std::span<const double> values);

std::size_t classify(const Ensemble& ensemble, std::span<const double> input);

/// Fraction of examples whose predicted class differs from the label.
double error_rate(const Ensemble& ensemble, const Dataset& data);

struct ComponentError {
  double error = 0.0;      // E_i
  double ambiguity = 0.0;  // D_i
};

/// Ensemble error split into mean component error minus mean ambiguity.
/// Squared differences are summed over outputs and averaged over examples.
struct Decomposition {
  double ensemble_error = 0.0;   // E
  double mean_error = 0.0;       // weighted mean of E_i
  double mean_ambiguity = 0.0;   // weighted mean of D_i
  std::vector<ComponentError> per_component;
};

Decomposition decompose(const Ensemble& ensemble, const Dataset& data);

}  // namespace kmpso
