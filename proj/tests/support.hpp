#pragma once

#include <cstddef>
#include <vector>

#include "kmpso/data.hpp"
#include "kmpso/rng.hpp"

namespace kmpso::testing {

inline std::vector<double> random_vector(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

/// p examples with features in [0,1] and random 1-of-m targets.
inline Dataset random_dataset(Rng& rng, std::size_t p, std::size_t n, std::size_t m) {
  Dataset d;
  d.features = Matrix(p, n);
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < n; ++c) d.features(r, c) = rng.uniform01();
    d.labels.push_back(rng.index(m));
    d.row_ids.push_back(r);
  }
  d.targets = encode_labels(d.labels, m);
  return d;
}

}  // namespace kmpso::testing
