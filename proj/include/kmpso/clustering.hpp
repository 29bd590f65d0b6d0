#pragma once

#include <cstddef>
#include <vector>

#include "kmpso/data.hpp"
#include "kmpso/rng.hpp"

namespace kmpso {

/// Result of a k-means run. Points and centroids are rows of a Matrix.
struct ClusterAssignment {
  Matrix centroids;                  // k x d
  std::vector<std::size_t> labels;   // one per point, in [0, k)
  double within_sse = 0.0;
  std::size_t iterations = 0;
  /// within_sse after every centroid update, in order.
  std::vector<double> sse_history;

  std::size_t k() const noexcept { return centroids.rows(); }
  std::vector<std::size_t> sizes() const;
  std::vector<std::size_t> members(std::size_t cluster) const;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

/// Nearest centroid of every point; ties go to the lowest centroid index.
std::vector<std::size_t> assign(const Matrix& points, const Matrix& centroids);

/// Mean of each cluster. An empty cluster takes over the point farthest from
/// its own centroid (among clusters with more than one member); that point is
/// relabeled and its donor's mean recomputed, so `labels` may change.
Matrix recompute_centroids(const Matrix& points, std::vector<std::size_t>& labels,
                           std::size_t k);

double within_sse(const Matrix& points, const std::vector<std::size_t>& labels,
                  const Matrix& centroids);

/// Lloyd iterations until the labels repeat or `max_iters` updates ran.
/// With `seeds` the run starts from those centroids; otherwise k distinct
/// points are drawn uniformly without replacement (k draws of `rng`).
ClusterAssignment kmeans(const Matrix& points, std::size_t k, Rng& rng,
                         const Matrix* seeds = nullptr, std::size_t max_iters = 100);

}  // namespace kmpso
