#include "kmpso/clustering.hpp"

#include <limits>
#include <numeric>
#include <string>

#include "kmpso/error.hpp"

namespace kmpso {
namespace {

void mean_of(const Matrix& points, const std::vector<std::size_t>& labels, std::size_t cluster,
             std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  std::size_t count = 0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    if (labels[i] != cluster) continue;
    const auto p = points.row(i);
    for (std::size_t d = 0; d < out.size(); ++d) out[d] += p[d];
    ++count;
  }
  if (count == 0) return;
  for (double& v : out) v /= static_cast<double>(count);
}

}  // namespace

std::vector<std::size_t> ClusterAssignment::sizes() const {
  std::vector<std::size_t> out(k(), 0);
  for (std::size_t l : labels) ++out[l];
  return out;
}

std::vector<std::size_t> ClusterAssignment::members(std::size_t cluster) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == cluster) out.push_back(i);
  }
  return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    sum += diff * diff;
  }
  return sum;
}

std::vector<std::size_t> assign(const Matrix& points, const Matrix& centroids) {
  if (centroids.rows() == 0) throw ContractError("assign: no centroids");
  if (points.cols() != centroids.cols()) {
    throw ContractError("assign: points have dimension " + std::to_string(points.cols()) +
                        ", centroids " + std::to_string(centroids.cols()));
  }
  std::vector<std::size_t> labels(points.rows(), 0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
      const double d = squared_distance(points.row(i), centroids.row(c));
      if (d < best) {
        best = d;
        labels[i] = c;
      }
    }
  }
  return labels;
}

Matrix recompute_centroids(const Matrix& points, std::vector<std::size_t>& labels,
                           std::size_t k) {
  if (k == 0) throw ContractError("recompute_centroids: k must be positive");
  if (k > points.rows()) {
    throw ContractError("recompute_centroids: k=" + std::to_string(k) + " exceeds " +
                        std::to_string(points.rows()) + " points");
  }
  if (labels.size() != points.rows()) throw ContractError("recompute_centroids: label count");
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t l : labels) {
    if (l >= k) throw ContractError("recompute_centroids: label out of range");
    ++counts[l];
  }

  Matrix centroids(k, points.cols());
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] > 0) mean_of(points, labels, c, centroids.row(c));
  }

  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] > 0) continue;
    std::size_t far = points.rows();
    double far_dist = -1.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
      if (counts[labels[i]] < 2) continue;
      const double d = squared_distance(points.row(i), centroids.row(labels[i]));
      if (d > far_dist) {
        far_dist = d;
        far = i;
      }
    }
    const std::size_t donor = labels[far];
    labels[far] = c;
    --counts[donor];
    counts[c] = 1;
    std::copy_n(points.row(far).begin(), points.cols(), centroids.row(c).begin());
    mean_of(points, labels, donor, centroids.row(donor));
  }
  return centroids;
}

double within_sse(const Matrix& points, const std::vector<std::size_t>& labels,
                  const Matrix& centroids) {
  double sum = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    sum += squared_distance(points.row(i), centroids.row(labels[i]));
  }
  return sum;
}

ClusterAssignment kmeans(const Matrix& points, std::size_t k, Rng& rng, const Matrix* seeds,
                         std::size_t max_iters) {
  if (k == 0) throw ContractError("kmeans: k must be positive");
  if (points.rows() < k) {
    throw ContractError("kmeans: " + std::to_string(points.rows()) + " points for k=" +
                        std::to_string(k));
  }
  if (max_iters == 0) throw ContractError("kmeans: max_iters must be positive");

  ClusterAssignment result;
  if (seeds != nullptr) {
    if (seeds->rows() != k || seeds->cols() != points.cols()) {
      throw ContractError("kmeans: seed centroids have the wrong shape");
    }
    result.centroids = *seeds;
  } else {
    std::vector<std::size_t> order(points.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    result.centroids = Matrix(k, points.cols());
    for (std::size_t c = 0; c < k; ++c) {
      std::swap(order[c], order[c + rng.index(points.rows() - c)]);
      std::copy_n(points.row(order[c]).begin(), points.cols(), result.centroids.row(c).begin());
    }
  }

  result.labels = assign(points, result.centroids);
  while (true) {
    result.centroids = recompute_centroids(points, result.labels, k);
    result.sse_history.push_back(within_sse(points, result.labels, result.centroids));
    ++result.iterations;
    if (result.iterations >= max_iters) break;
    auto next = assign(points, result.centroids);
    if (next == result.labels) break;
    result.labels = std::move(next);
  }
  result.within_sse = result.sse_history.back();
  return result;
}

}  // namespace kmpso
