#include "kmpso/ensemble.hpp"

#include <string>

#include "kmpso/error.hpp"

namespace kmpso {

Ensemble make_ensemble(const Topology& topology, std::vector<std::vector<double>> components) {
  if (components.empty()) throw ContractError("ensemble needs at least one component");
  const std::size_t d = dimension(topology);
  for (const auto& c : components) {
    if (c.size() != d) throw ContractError("ensemble component has the wrong dimension");
  }
  Ensemble e;
  e.topology = topology;
  e.weights.assign(components.size(), 1.0 / static_cast<double>(components.size()));
  e.components = std::move(components);
  return e;
}

Ensemble build_ensemble(const Swarm& swarm, const ClusterAssignment& clusters,
                        const Topology& topology) {
  const auto champions = cluster_champions(swarm.particles, clusters);
  std::vector<std::vector<double>> components;
  components.reserve(champions.size());
  for (std::size_t i : champions) components.push_back(swarm.particles[i].pbest_position);
  return make_ensemble(topology, std::move(components));
}

std::vector<double> predict(const Ensemble& ensemble, std::span<const double> input) {
  const Topology& t = ensemble.topology;
  std::vector<double> hidden(t.n_hidden);
  std::vector<double> out(t.n_outputs);
  std::vector<double> combined(t.n_outputs, 0.0);
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    forward(ensemble.components[i], t, input, hidden, out);
    for (std::size_t k = 0; k < t.n_outputs; ++k) combined[k] += ensemble.weights[i] * out[k];
  }
  return combined;
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw ContractError("argmax: empty vector");
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[best]) best = k;
  }
  return best;
}

std::size_t classify(const Ensemble& ensemble, std::span<const double> input) {
  if (ensemble.topology.n_outputs < 2) {
    throw ContractError("classify: needs at least two outputs");
  }
  return argmax(predict(ensemble, input));
}

double error_rate(const Ensemble& ensemble, const Dataset& data) {
  if (data.size() == 0) throw DataError("error_rate: empty dataset");
  std::size_t wrong = 0;
  for (std::size_t l = 0; l < data.size(); ++l) {
    if (classify(ensemble, data.features.row(l)) != data.labels[l]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

Decomposition decompose(const Ensemble& ensemble, const Dataset& data) {
  if (data.size() == 0) throw DataError("decompose: empty dataset");
  const Topology& t = ensemble.topology;
  if (data.n_classes() != t.n_outputs) {
    throw ContractError("decompose: target width does not match the ensemble");
  }
  const std::size_t k = ensemble.size();
  const std::size_t m = t.n_outputs;

  Decomposition result;
  result.per_component.resize(k);
  std::vector<double> hidden(t.n_hidden);
  std::vector<std::vector<double>> outputs(k, std::vector<double>(m));
  std::vector<double> combined(m);

  for (std::size_t l = 0; l < data.size(); ++l) {
    const auto x = data.features.row(l);
    const auto target = data.targets.row(l);
    std::fill(combined.begin(), combined.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      forward(ensemble.components[i], t, x, hidden, outputs[i]);
      for (std::size_t o = 0; o < m; ++o) combined[o] += ensemble.weights[i] * outputs[i][o];
    }
    for (std::size_t o = 0; o < m; ++o) {
      const double e = combined[o] - target[o];
      result.ensemble_error += e * e;
    }
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t o = 0; o < m; ++o) {
        const double e = outputs[i][o] - target[o];
        const double a = outputs[i][o] - combined[o];
        result.per_component[i].error += e * e;
        result.per_component[i].ambiguity += a * a;
      }
    }
  }

  const double p = static_cast<double>(data.size());
  result.ensemble_error /= p;
  for (std::size_t i = 0; i < k; ++i) {
    auto& c = result.per_component[i];
    c.error /= p;
    c.ambiguity /= p;
    result.mean_error += ensemble.weights[i] * c.error;
    result.mean_ambiguity += ensemble.weights[i] * c.ambiguity;
  }
  return result;
}

}  // namespace kmpso
