#pragma once

#include <Eigen/SparseCore>

#include "gae/common.hpp"
#include "gae/graph.hpp"

namespace gae {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t>;

enum class OperatorKind { symmetric, out_degree };

/// Normalized message-passing matrix, self-loops included.
struct Operator {
  OperatorKind kind = OperatorKind::symmetric;
  SparseMatrix matrix;

  int n() const { return static_cast<int>(matrix.rows()); }
};

/// (D+I)^-1/2 (A+I) (D+I)^-1/2 for an undirected graph.
Operator symmetric_normalize(const SparseGraph& g);

/// (D_out+I)^-1 (A+I); every row sums to one.
Operator out_degree_normalize(const SparseGraph& g);

Operator normalize(const SparseGraph& g, OperatorKind kind);

/// Normalization of A + lambda * A_extra, both on the same node set.
/// With lambda == 0 the result equals normalize(g, kind) exactly.
Operator normalize_mixed(const SparseGraph& g, const SparseGraph& extra, double lambda, OperatorKind kind);

/// Normalization of an arbitrary non-negative square matrix (self-loops added).
Operator normalize_matrix(const SparseMatrix& adjacency, OperatorKind kind);

/// Adjacency of g as a sparse matrix.
SparseMatrix adjacency_matrix(const SparseGraph& g);

/// op * M.
Matrix apply(const Operator& op, const Matrix& m);

/// op^T * M.
Matrix apply_transpose(const Operator& op, const Matrix& m);

}  // namespace gae
