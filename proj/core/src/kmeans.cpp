#include <limits>

#include "gae/clustering.hpp"

namespace gae {
namespace {

double squared_distance(const Matrix& a, Eigen::Index i, const Matrix& b, Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

Matrix kmeans_plus_plus(const Matrix& x, int k, Rng& rng) {
  const Eigen::Index n = x.rows();
  Matrix centers(k, x.cols());
  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  centers.row(0) = x.row(first(rng));
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) d2[i] = squared_distance(x, i, centers, 0);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;
    Eigen::Index pick = 0;
    if (total > 0.0) {
      std::discrete_distribution<Eigen::Index> draw(d2.begin(), d2.end());
      pick = draw(rng);
    } else {
      pick = first(rng);
    }
    centers.row(c) = x.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(x, i, centers, c));
  }
  return centers;
}

// Nearest centroid per point, ties to the lowest index; returns the inertia.
double assign(const Matrix& x, const Matrix& centers, std::vector<int>& labels, std::vector<double>& dist) {
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centers.rows(); ++c) {
      const double d = squared_distance(x, i, centers, c);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    labels[i] = best;
    dist[i] = best_d;
    inertia += best_d;
  }
  return inertia;
}

// Moves the farthest point of a multi-point cluster into each empty cluster.
void repair_empty(std::vector<int>& labels, std::vector<double>& dist, int k) {
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int l : labels) ++counts[l];
  for (int c = 0; c < k; ++c) {
    if (counts[c] > 0) continue;
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (counts[labels[i]] > 1 && dist[i] > far_d) {
        far_d = dist[i];
        far = i;
      }
    }
    --counts[labels[far]];
    labels[far] = c;
    counts[c] = 1;
    dist[far] = 0.0;
  }
}

Matrix centroids(const Matrix& x, const std::vector<int>& labels, int k) {
  Matrix centers = Matrix::Zero(k, x.cols());
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    centers.row(labels[i]) += x.row(i);
    ++counts[labels[i]];
  }
  for (int c = 0; c < k; ++c) centers.row(c) /= static_cast<double>(counts[c]);
  return centers;
}

double inertia_of(const Matrix& x, const Matrix& centers, const std::vector<int>& labels) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) total += squared_distance(x, i, centers, labels[i]);
  return total;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iters) {
  const auto n = static_cast<int>(points.rows());
  if (k < 1) throw InvalidArgument("kmeans needs K >= 1");
  if (k > n) throw InvalidArgument("kmeans: K = " + std::to_string(k) + " exceeds the " + std::to_string(n) + " points");
  if (max_iters < 1) throw InvalidArgument("kmeans needs at least one iteration");
  if (!points.allFinite()) throw NumericError("kmeans input contains non-finite values");

  Rng rng(seed);
  Matrix centers = kmeans_plus_plus(points, k, rng);
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::vector<int> next(static_cast<std::size_t>(n));
  std::vector<double> dist(static_cast<std::size_t>(n));
  KMeansResult result;
  for (int it = 0; it < max_iters; ++it) {
    assign(points, centers, next, dist);
    repair_empty(next, dist, k);
    const bool stable = next == labels;
    labels = next;
    centers = centroids(points, labels, k);
    result.inertia_trace.push_back(inertia_of(points, centers, labels));
    result.iterations = it + 1;
    if (stable) break;
  }
  result.partition.assignment = labels;
  result.partition.k = k;
  result.centroids = centers;
  result.inertia = result.inertia_trace.back();
  return result;
}

}  // namespace gae
