#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kmpso/data.hpp"

namespace kmpso {

/// Layer sizes of a three-layer feedforward network.
struct Topology {
  std::size_t n_inputs = 1;
  std::size_t n_hidden = 1;
  std::size_t n_outputs = 1;

  bool operator==(const Topology&) const = default;
};

/// Throws ConfigError unless every layer has at least one unit.
void validate(const Topology& topology);

/// Number of weights and biases: n*q + q + q*m + m.
std::size_t dimension(const Topology& topology);

/// Offsets of the four parameter blocks inside a flat position vector:
/// input->hidden weights (row per hidden unit), hidden biases,
/// hidden->output weights (row per output unit), output biases.
struct Layout {
  std::size_t hidden_weights;
  std::size_t hidden_biases;
  std::size_t output_weights;
  std::size_t output_biases;
  std::size_t size;
};

Layout layout(const Topology& topology);

/// Logistic function. Saturates to [tiny, 1 - DBL_EPSILON] so outputs stay
/// strictly inside (0, 1).
double sigmoid(double x);

/// Evaluates the network encoded by `position` on one input. `hidden` is
/// scratch space of n_hidden values; `output` receives n_outputs values.
void forward(std::span<const double> position, const Topology& topology,
             std::span<const double> input, std::span<double> hidden,
             std::span<double> output);

std::vector<double> forward(std::span<const double> position, const Topology& topology,
                            std::span<const double> input);

/// Mean squared error over all outputs and examples, (1/(m p)) sum sum (f - t)^2.
double mse_fitness(std::span<const double> position, const Topology& topology,
                   const Dataset& data);

}  // namespace kmpso
