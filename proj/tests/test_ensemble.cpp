#include <doctest.h>

#include <cmath>

#include "kmpso/ensemble.hpp"
#include "kmpso/error.hpp"
#include "support.hpp"

using namespace kmpso;
using kmpso::testing::random_dataset;
using kmpso::testing::random_vector;

namespace {

double logit(double p) { return std::log(p / (1.0 - p)); }

/// Network with zero weights whose outputs are the given constants.
std::vector<double> constant_net(const Topology& t, std::vector<double> outputs) {
  std::vector<double> pos(dimension(t), 0.0);
  const Layout l = layout(t);
  for (std::size_t k = 0; k < outputs.size(); ++k) pos[l.output_biases + k] = logit(outputs[k]);
  return pos;
}

Swarm swarm_with_fitness(std::vector<double> fitness, std::size_t dim, Rng& rng) {
  Swarm s;
  s.dimension = dim;
  for (double f : fitness) {
    Particle p;
    p.pbest_position = random_vector(rng, dim, -5, 5);
    p.position = p.pbest_position;
    p.velocity.assign(dim, 0.0);
    p.pbest_fitness = f;
    s.particles.push_back(p);
  }
  return s;
}

}  // namespace

TEST_CASE("build_ensemble takes each cluster's best pbest") {
  Rng rng(1);
  const Topology t{2, 2, 2};
  const std::size_t dim = dimension(t);

  SUBCASE("one cluster") {
    const Swarm s = swarm_with_fitness({0.4, 0.2, 0.3}, dim, rng);
    ClusterAssignment c;
    c.centroids = Matrix(1, dim);
    c.labels = {0, 0, 0};
    const Ensemble e = build_ensemble(s, c, t);
    REQUIRE(e.size() == 1);
    CHECK(e.components[0] == s.particles[1].pbest_position);
    CHECK(e.weights == std::vector<double>{1.0});
  }
  SUBCASE("two clusters") {
    const Swarm s = swarm_with_fitness({0.3, 0.1, 0.2, 0.5}, dim, rng);
    ClusterAssignment c;
    c.centroids = Matrix(2, dim);
    c.labels = {0, 0, 1, 1};
    const Ensemble e = build_ensemble(s, c, t);
    REQUIRE(e.size() == 2);
    CHECK(e.components[0] == s.particles[1].pbest_position);
    CHECK(e.components[1] == s.particles[2].pbest_position);
    CHECK(e.weights == std::vector<double>{0.5, 0.5});
  }
  SUBCASE("random swarm, three clusters") {
    std::vector<double> fitness;
    for (int i = 0; i < 30; ++i) fitness.push_back(rng.uniform01());
    const Swarm s = swarm_with_fitness(fitness, dim, rng);
    ClusterAssignment c;
    c.centroids = Matrix(3, dim);
    for (int i = 0; i < 30; ++i) c.labels.push_back(rng.index(3));
    c.labels[0] = 0, c.labels[1] = 1, c.labels[2] = 2;
    const Ensemble e = build_ensemble(s, c, t);
    for (std::size_t k = 0; k < 3; ++k) {
      double best = 2.0;
      std::size_t who = 0;
      for (std::size_t i = 0; i < 30; ++i) {
        if (c.labels[i] == k && fitness[i] < best) best = fitness[i], who = i;
      }
      CHECK(e.components[k] == s.particles[who].pbest_position);
    }
    double sum = 0.0;
    for (double w : e.weights) sum += w;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("empty cluster") {
    const Swarm s = swarm_with_fitness({0.3, 0.1}, dim, rng);
    ClusterAssignment c;
    c.centroids = Matrix(3, dim);
    c.labels = {0, 1};
    CHECK_THROWS_AS(build_ensemble(s, c, t), ContractError);
  }
}

TEST_CASE("predict averages component outputs") {
  Rng rng(2);
  SUBCASE("single component is the network itself") {
    const Topology t{3, 4, 2};
    const auto pos = random_vector(rng, dimension(t), -5, 5);
    const Ensemble e = make_ensemble(t, {pos});
    const auto x = random_vector(rng, 3, 0, 1);
    CHECK(predict(e, x) == forward(pos, t, x));
  }
  SUBCASE("0.2 and 0.8 average to 0.5") {
    const Topology t{1, 1, 1};
    const Ensemble e = make_ensemble(t, {constant_net(t, {0.2}), constant_net(t, {0.8})});
    CHECK(predict(e, std::vector<double>{0.3})[0] == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("three random components") {
    const Topology t{4, 3, 3};
    std::vector<std::vector<double>> comps;
    for (int i = 0; i < 3; ++i) comps.push_back(random_vector(rng, dimension(t), -5, 5));
    const Ensemble e = make_ensemble(t, comps);
    const auto x = random_vector(rng, 4, 0, 1);
    std::vector<double> want(3, 0.0);
    for (const auto& c : comps) {
      const auto f = forward(c, t, x);
      for (int k = 0; k < 3; ++k) want[k] += f[k] / 3.0;
    }
    const auto got = predict(e, x);
    for (int k = 0; k < 3; ++k) CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-14));
  }
}

TEST_CASE("classify") {
  const Topology t{2, 2, 2};
  const std::vector<double> x{0.1, 0.2};
  CHECK(classify(make_ensemble(t, {constant_net(t, {0.1, 0.9})}), x) == 1);
  CHECK(classify(make_ensemble(t, {std::vector<double>(dimension(t), 0.0)}), x) == 0);

  SUBCASE("argmax scan over six classes") {
    Rng rng(6);
    const Topology g{9, 7, 6};
    for (int trial = 0; trial < 20; ++trial) {
      const Ensemble e = make_ensemble(g, {random_vector(rng, dimension(g), -5, 5),
                                           random_vector(rng, dimension(g), -5, 5)});
      const auto x = random_vector(rng, 9, 0, 1);
      const auto out = predict(e, x);
      std::size_t best = 0;
      for (std::size_t k = 0; k < out.size(); ++k)
        if (out[k] > out[best]) best = k;
      CHECK(classify(e, x) == best);
    }
  }
  SUBCASE("argmax ignores strictly increasing transforms") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      auto v = random_vector(rng, 6, 0, 1);
      if (trial % 5 == 0) v[4] = v[1];
      std::vector<double> w(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) w[i] = std::exp(3.0 * v[i]) - 7.0;
      CHECK(argmax(v) == argmax(w));
    }
  }
  CHECK_THROWS_AS(classify(make_ensemble({2, 2, 1}, {std::vector<double>(9, 0.0)}), x), ContractError);
}

TEST_CASE("error_rate") {
  const Topology t{2, 2, 2};
  const Ensemble e = make_ensemble(t, {constant_net(t, {0.3, 0.7})});
  Dataset d;
  d.features = Matrix(4, 2, 0.5);
  d.labels = {1, 1, 1, 1};
  d.targets = encode_labels(d.labels, 2);
  CHECK(error_rate(e, d) == 0.0);
  d.labels[2] = 0;
  CHECK(error_rate(e, d) == 0.25);
  Dataset empty;
  empty.features = Matrix(0, 2);
  empty.targets = Matrix(0, 2);
  CHECK_THROWS_AS(error_rate(e, empty), DataError);
}

TEST_CASE("error decomposition") {
  Rng rng(10);
  const Topology t{3, 4, 2};
  const Dataset data = random_dataset(rng, 10, 3, 2);

  SUBCASE("single component has no ambiguity") {
    const Ensemble e = make_ensemble(t, {random_vector(rng, dimension(t), -5, 5)});
    const Decomposition d = decompose(e, data);
    CHECK(d.per_component[0].ambiguity == 0.0);
    CHECK(d.mean_ambiguity == 0.0);
    CHECK(d.ensemble_error == d.per_component[0].error);
    CHECK(d.ensemble_error == d.mean_error);
  }
  SUBCASE("identical components") {
    const auto pos = random_vector(rng, dimension(t), -5, 5);
    const Ensemble e = make_ensemble(t, {pos, pos, pos, pos});
    const Decomposition d = decompose(e, data);
    for (const auto& c : d.per_component) CHECK(c.ambiguity == doctest::Approx(0.0).epsilon(1e-30));
    CHECK(d.ensemble_error == doctest::Approx(d.mean_error).epsilon(1e-14));
  }
  SUBCASE("E = E_bar - D_bar on random ensembles") {
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<std::vector<double>> comps;
      for (int i = 0; i < 3; ++i) comps.push_back(random_vector(rng, dimension(t), -5, 5));
      const Ensemble e = make_ensemble(t, comps);
      const Decomposition d = decompose(e, data);
      CHECK(std::abs(d.ensemble_error - (d.mean_error - d.mean_ambiguity)) <= 1e-9);
      CHECK(d.mean_ambiguity >= 0.0);
      CHECK(d.ensemble_error <= d.mean_error + 1e-12);

      // Ensemble error from a separate pass over predict().
      double direct = 0.0;
      for (std::size_t l = 0; l < data.size(); ++l) {
        const auto f = predict(e, data.features.row(l));
        for (std::size_t k = 0; k < 2; ++k) direct += (f[k] - data.targets(l, k)) * (f[k] - data.targets(l, k));
      }
      CHECK(d.ensemble_error == doctest::Approx(direct / 10.0).epsilon(1e-13));
      // Component error matches the network fitness up to the 1/m factor.
      CHECK(d.per_component[1].error == doctest::Approx(2.0 * mse_fitness(comps[1], t, data)).epsilon(1e-13));
    }
  }
  SUBCASE("empty dataset") {
    Dataset empty;
    empty.features = Matrix(0, 3);
    empty.targets = Matrix(0, 2);
    CHECK_THROWS_AS(decompose(make_ensemble(t, {std::vector<double>(dimension(t), 0.0)}), empty), DataError);
  }
}
