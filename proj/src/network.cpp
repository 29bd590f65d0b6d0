#include "kmpso/network.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>

#include "kmpso/error.hpp"

namespace kmpso {

void validate(const Topology& t) {
  if (t.n_inputs == 0 || t.n_hidden == 0 || t.n_outputs == 0) {
    throw ConfigError("topology layers must all have at least one unit");
  }
}

std::size_t dimension(const Topology& t) {
  return t.n_inputs * t.n_hidden + t.n_hidden + t.n_hidden * t.n_outputs + t.n_outputs;
}

Layout layout(const Topology& t) {
  Layout l{};
  l.hidden_weights = 0;
  l.hidden_biases = t.n_inputs * t.n_hidden;
  l.output_weights = l.hidden_biases + t.n_hidden;
  l.output_biases = l.output_weights + t.n_hidden * t.n_outputs;
  l.size = l.output_biases + t.n_outputs;
  return l;
}

double sigmoid(double x) {
  constexpr double kLimit = 500.0;
  x = std::clamp(x, -kLimit, kLimit);
  return std::min(1.0 / (1.0 + std::exp(-x)), 1.0 - DBL_EPSILON);
}

void forward(std::span<const double> position, const Topology& t,
             std::span<const double> input, std::span<double> hidden,
             std::span<double> output) {
  const Layout l = layout(t);
  if (position.size() != l.size) {
    throw ContractError("forward: position has " + std::to_string(position.size()) +
                        " values, topology needs " + std::to_string(l.size));
  }
  if (input.size() != t.n_inputs || hidden.size() != t.n_hidden ||
      output.size() != t.n_outputs) {
    throw ContractError("forward: buffer sizes do not match topology");
  }
  const double* w = position.data();
  for (std::size_t j = 0; j < t.n_hidden; ++j) {
    const double* row = w + l.hidden_weights + j * t.n_inputs;
    double sum = w[l.hidden_biases + j];
    for (std::size_t i = 0; i < t.n_inputs; ++i) sum += row[i] * input[i];
    hidden[j] = sigmoid(sum);
  }
  for (std::size_t k = 0; k < t.n_outputs; ++k) {
    const double* row = w + l.output_weights + k * t.n_hidden;
    double sum = w[l.output_biases + k];
    for (std::size_t j = 0; j < t.n_hidden; ++j) sum += row[j] * hidden[j];
    output[k] = sigmoid(sum);
  }
}

std::vector<double> forward(std::span<const double> position, const Topology& t,
                            std::span<const double> input) {
  std::vector<double> hidden(t.n_hidden);
  std::vector<double> output(t.n_outputs);
  forward(position, t, input, hidden, output);
  return output;
}

double mse_fitness(std::span<const double> position, const Topology& t, const Dataset& data) {
  if (data.size() == 0) throw DataError("mse_fitness: empty dataset");
  if (data.n_inputs() != t.n_inputs || data.n_classes() != t.n_outputs) {
    throw ContractError("mse_fitness: dataset shape does not match topology");
  }
  std::vector<double> hidden(t.n_hidden);
  std::vector<double> output(t.n_outputs);
  double sum = 0.0;
  for (std::size_t l = 0; l < data.size(); ++l) {
    forward(position, t, data.features.row(l), hidden, output);
    const auto target = data.targets.row(l);
    for (std::size_t k = 0; k < t.n_outputs; ++k) {
      const double e = output[k] - target[k];
      sum += e * e;
    }
  }
  return sum / static_cast<double>(t.n_outputs * data.size());
}

}  // namespace kmpso
