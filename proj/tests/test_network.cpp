#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kmpso/error.hpp"
#include "kmpso/network.hpp"
#include "support.hpp"

using namespace kmpso;
using kmpso::testing::random_dataset;
using kmpso::testing::random_vector;

namespace {

// Direct transcription of the two-layer evaluation: the position is read
// front to back into nested weight arrays, independent of Layout.
std::vector<double> oracle_forward(const std::vector<double>& pos, std::size_t n, std::size_t q,
                                   std::size_t m, const std::vector<double>& x) {
  std::size_t cursor = 0;
  auto take = [&] { return pos.at(cursor++); };
  std::vector<std::vector<double>> w_in(q, std::vector<double>(n));
  std::vector<double> b_hidden(q);
  std::vector<std::vector<double>> w_out(m, std::vector<double>(q));
  std::vector<double> b_out(m);
  for (auto& row : w_in)
    for (auto& w : row) w = take();
  for (auto& b : b_hidden) b = take();
  for (auto& row : w_out)
    for (auto& w : row) w = take();
  for (auto& b : b_out) b = take();
  REQUIRE(cursor == pos.size());

  std::vector<double> h(q);
  for (std::size_t j = 0; j < q; ++j) {
    double z = b_hidden[j];
    for (std::size_t i = 0; i < n; ++i) z += w_in[j][i] * x[i];
    h[j] = 1.0 / (1.0 + std::exp(-z));
  }
  std::vector<double> f(m);
  for (std::size_t k = 0; k < m; ++k) {
    double z = b_out[k];
    for (std::size_t j = 0; j < q; ++j) z += w_out[k][j] * h[j];
    f[k] = 1.0 / (1.0 + std::exp(-z));
  }
  return f;
}

}  // namespace

TEST_CASE("dimension counts every weight and bias") {
  CHECK(dimension({14, 7, 2}) == 121);
  CHECK(dimension({1, 1, 1}) == 4);
  CHECK(dimension({8, 7, 2}) == 79);
  const Layout l = layout({14, 7, 2});
  CHECK(l.hidden_biases == 98);
  CHECK(l.output_weights == 105);
  CHECK(l.output_biases == 119);
  CHECK(l.size == 121);
  CHECK_THROWS_AS(validate({0, 7, 2}), ConfigError);
}

TEST_CASE("sigmoid") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(std::log(3.0)) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(sigmoid(-std::log(3.0)) == doctest::Approx(0.25).epsilon(1e-15));
  for (double x : {-3.0, -0.4, 0.1, 2.5, 17.0}) {
    CHECK(sigmoid(-x) == doctest::Approx(1.0 - sigmoid(x)).epsilon(1e-12));
  }
  SUBCASE("saturation stays inside (0,1)") {
    for (double x : {-1e6, -600.0, -500.0, 40.0, 500.0, 1e6}) {
      const double s = sigmoid(x);
      CHECK(s > 0.0);
      CHECK(s < 1.0);
    }
    CHECK(sigmoid(1e6) == sigmoid(500.0));
    CHECK(sigmoid(-1e6) == sigmoid(-500.0));
  }
}

TEST_CASE("forward pass") {
  SUBCASE("all-zero position gives 0.5 everywhere") {
    const Topology t{4, 3, 5};
    const std::vector<double> pos(dimension(t), 0.0);
    for (double f : forward(pos, t, std::vector<double>{0.3, -2.0, 9.0, 1.0})) CHECK(f == 0.5);
  }
  SUBCASE("hand-built 1-1-1 network") {
    const Topology t{1, 1, 1};
    const double ln3 = std::log(3.0);
    const std::vector<double> pos{0.0, 0.0, 2.0 * ln3, -ln3};
    const auto f = forward(pos, t, std::vector<double>{123.0});
    CHECK(f[0] == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("frozen 2-3-2 value") {
    const Topology t{2, 3, 2};
    std::vector<double> pos(dimension(t));
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = 0.1 * (i + 1) * (i % 2 ? -1.0 : 1.0);
    const auto f = forward(pos, t, std::vector<double>{0.3, -0.7});
    CHECK(f[0] == doctest::Approx(0.054843046493959775).epsilon(1e-14));
    CHECK(f[1] == doctest::Approx(0.963875074881325).epsilon(1e-14));
  }
  SUBCASE("random 2-3-2 positions match the oracle") {
    Rng rng(7);
    const Topology t{2, 3, 2};
    for (int trial = 0; trial < 50; ++trial) {
      const auto pos = random_vector(rng, dimension(t), -5, 5);
      const auto x = random_vector(rng, 2, -1, 2);
      const auto got = forward(pos, t, x);
      const auto want = oracle_forward(pos, 2, 3, 2, x);
      for (std::size_t k = 0; k < 2; ++k) CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-13));
    }
  }
  SUBCASE("length mismatch") {
    const Topology t{2, 3, 2};
    const std::vector<double> pos(dimension(t) - 1, 0.0);
    CHECK_THROWS_AS(forward(pos, t, std::vector<double>{0, 0}), ContractError);
    const std::vector<double> ok(dimension(t), 0.0);
    CHECK_THROWS_AS(forward(ok, t, std::vector<double>{0, 0, 0}), ContractError);
  }
}

TEST_CASE("forward properties") {
  Rng rng(11);
  const Topology t{5, 4, 3};
  const Layout l = layout(t);

  SUBCASE("outputs strictly inside (0,1), even at the bounds") {
    for (int trial = 0; trial < 200; ++trial) {
      auto pos = random_vector(rng, dimension(t), -5, 5);
      if (trial % 2) std::transform(pos.begin(), pos.end(), pos.begin(), [](double v) { return v < 0 ? -5.0 : 5.0; });
      for (double f : forward(pos, t, random_vector(rng, 5, 0, 1))) {
        CHECK(f > 0.0);
        CHECK(f < 1.0);
      }
    }
  }

  SUBCASE("output bias k only moves output k") {
    auto pos = random_vector(rng, dimension(t), -2, 2);
    const auto x = random_vector(rng, 5, 0, 1);
    const auto base = forward(pos, t, x);
    for (std::size_t k = 0; k < t.n_outputs; ++k) {
      auto moved = pos;
      moved[l.output_biases + k] += 0.5;
      const auto out = forward(moved, t, x);
      for (std::size_t o = 0; o < t.n_outputs; ++o) {
        if (o == k) {
          CHECK(out[o] > base[o]);
        } else {
          CHECK(out[o] == base[o]);
        }
      }
    }
  }

  SUBCASE("permuting hidden units leaves outputs unchanged") {
    const auto pos = random_vector(rng, dimension(t), -5, 5);
    std::vector<std::size_t> perm{2, 0, 3, 1};
    std::vector<double> permuted(pos.size());
    for (std::size_t j = 0; j < t.n_hidden; ++j) {
      const std::size_t src = perm[j];
      for (std::size_t i = 0; i < t.n_inputs; ++i) {
        permuted[l.hidden_weights + j * t.n_inputs + i] = pos[l.hidden_weights + src * t.n_inputs + i];
      }
      permuted[l.hidden_biases + j] = pos[l.hidden_biases + src];
      for (std::size_t k = 0; k < t.n_outputs; ++k) {
        permuted[l.output_weights + k * t.n_hidden + j] = pos[l.output_weights + k * t.n_hidden + src];
      }
    }
    for (std::size_t k = 0; k < t.n_outputs; ++k) permuted[l.output_biases + k] = pos[l.output_biases + k];
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = random_vector(rng, 5, 0, 1);
      const auto a = forward(pos, t, x);
      const auto b = forward(permuted, t, x);
      for (std::size_t k = 0; k < 3; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-14));
    }
  }
}

TEST_CASE("mse fitness") {
  SUBCASE("zero when outputs equal targets") {
    const Topology t{3, 2, 2};
    Dataset d;
    d.features = Matrix(4, 3, 0.25);
    d.targets = Matrix(4, 2, 0.5);
    d.labels.assign(4, 0);
    CHECK(mse_fitness(std::vector<double>(dimension(t), 0.0), t, d) == 0.0);
  }
  SUBCASE("outputs 0.5 against targets 1") {
    const Topology t{2, 3, 1};
    Dataset d;
    d.features = Matrix(4, 2, 0.7);
    d.targets = Matrix(4, 1, 1.0);
    d.labels.assign(4, 0);
    CHECK(mse_fitness(std::vector<double>(dimension(t), 0.0), t, d) == 0.25);
  }
  SUBCASE("random network matches a brute-force double loop") {
    Rng rng(3);
    const Topology t{2, 3, 2};
    const Dataset d = random_dataset(rng, 5, 2, 2);
    for (int trial = 0; trial < 20; ++trial) {
      const auto pos = random_vector(rng, dimension(t), -5, 5);
      double sum = 0.0;
      for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t l = 0; l < 5; ++l) {
          const std::vector<double> x(d.features.row(l).begin(), d.features.row(l).end());
          const double e = oracle_forward(pos, 2, 3, 2, x)[k] - d.targets(l, k);
          sum += e * e;
        }
      }
      CHECK(mse_fitness(pos, t, d) == doctest::Approx(sum / 10.0).epsilon(1e-13));
    }
  }
  SUBCASE("invariant under example permutation, never negative") {
    Rng rng(5);
    const Topology t{4, 3, 3};
    const Dataset d = random_dataset(rng, 12, 4, 3);
    std::vector<std::size_t> order(12);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::reverse(order.begin(), order.end());
    std::swap(order[2], order[7]);
    Dataset shuffled;
    shuffled.features = select_rows(d.features, order);
    shuffled.targets = select_rows(d.targets, order);
    shuffled.labels.resize(12);
    for (int trial = 0; trial < 10; ++trial) {
      const auto pos = random_vector(rng, dimension(t), -5, 5);
      const double a = mse_fitness(pos, t, d);
      CHECK(a >= 0.0);
      CHECK(a == doctest::Approx(mse_fitness(pos, t, shuffled)).epsilon(1e-14));
    }
  }
  SUBCASE("empty dataset is an error") {
    const Topology t{2, 2, 2};
    Dataset d;
    d.features = Matrix(0, 2);
    d.targets = Matrix(0, 2);
    CHECK_THROWS_AS(mse_fitness(std::vector<double>(dimension(t), 0.0), t, d), DataError);
  }
}
