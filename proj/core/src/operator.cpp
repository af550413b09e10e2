#include "gae/operator.hpp"

#include <cmath>
#include <vector>

namespace gae {

SparseMatrix adjacency_matrix(const SparseGraph& g) {
  std::vector<Eigen::Triplet<double, std::int64_t>> trip;
  trip.reserve(static_cast<std::size_t>(g.nnz()));
  for (int i = 0; i < g.n(); ++i) {
    auto nb = g.neighbors(i);
    auto w = g.weights(i);
    for (std::size_t k = 0; k < nb.size(); ++k) trip.emplace_back(i, nb[k], w[k]);
  }
  SparseMatrix a(g.n(), g.n());
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

Operator normalize_matrix(const SparseMatrix& adjacency, OperatorKind kind) {
  const Eigen::Index n = adjacency.rows();
  if (adjacency.cols() != n) throw InvalidArgument("operator: adjacency must be square");

  std::vector<double> degree(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (SparseMatrix::InnerIterator it(adjacency, i); it; ++it) {
      if (it.value() < 0.0) throw InvalidArgument("operator: negative adjacency entry");
      degree[i] += it.value();
    }
  }

  std::vector<double> scale(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    scale[i] = kind == OperatorKind::symmetric ? 1.0 / std::sqrt(degree[i] + 1.0) : 1.0 / (degree[i] + 1.0);
  }

  std::vector<Eigen::Triplet<double, std::int64_t>> trip;
  trip.reserve(static_cast<std::size_t>(adjacency.nonZeros() + n));
  for (Eigen::Index i = 0; i < n; ++i) {
    bool diag_seen = false;
    for (SparseMatrix::InnerIterator it(adjacency, i); it; ++it) {
      const Eigen::Index j = it.col();
      double a = it.value();
      if (j == i) {
        a += 1.0;
        diag_seen = true;
      }
      const double factor = kind == OperatorKind::symmetric ? scale[i] * scale[j] : scale[i];
      trip.emplace_back(i, j, a * factor);
    }
    if (!diag_seen) {
      const double factor = kind == OperatorKind::symmetric ? scale[i] * scale[i] : scale[i];
      trip.emplace_back(i, i, factor);
    }
  }
  Operator op;
  op.kind = kind;
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  op.matrix.makeCompressed();
  return op;
}

Operator symmetric_normalize(const SparseGraph& g) {
  if (g.directed()) {
    throw InvalidArgument("symmetric normalization requires an undirected graph; use out_degree_normalize");
  }
  return normalize_matrix(adjacency_matrix(g), OperatorKind::symmetric);
}

Operator out_degree_normalize(const SparseGraph& g) {
  return normalize_matrix(adjacency_matrix(g), OperatorKind::out_degree);
}

Operator normalize(const SparseGraph& g, OperatorKind kind) {
  return kind == OperatorKind::symmetric ? symmetric_normalize(g) : out_degree_normalize(g);
}

Operator normalize_mixed(const SparseGraph& g, const SparseGraph& extra, double lambda, OperatorKind kind) {
  if (lambda == 0.0) return normalize(g, kind);
  if (extra.n() != g.n()) throw InvalidArgument("operator: prior graph has a different node count");
  if (lambda < 0.0) throw InvalidArgument("operator: lambda must be non-negative");
  if (kind == OperatorKind::symmetric && (g.directed() || extra.directed())) {
    throw InvalidArgument("symmetric normalization requires undirected graphs");
  }
  const SparseMatrix mixed = adjacency_matrix(g) + lambda * adjacency_matrix(extra);
  return normalize_matrix(mixed, kind);
}

Matrix apply(const Operator& op, const Matrix& m) {
  if (op.matrix.cols() != m.rows()) {
    throw InvalidArgument("apply: operator has " + std::to_string(op.matrix.cols()) + " columns but matrix has " +
                          std::to_string(m.rows()) + " rows");
  }
  return op.matrix * m;
}

Matrix apply_transpose(const Operator& op, const Matrix& m) {
  if (op.matrix.rows() != m.rows()) throw InvalidArgument("apply_transpose: dimension mismatch");
  return op.matrix.transpose() * m;
}

}  // namespace gae
