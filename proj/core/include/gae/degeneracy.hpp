#pragma once

#include <cstdint>
#include <vector>

#include "gae/common.hpp"
#include "gae/graph.hpp"
#include "gae/operator.hpp"

namespace gae {

struct CoreDecomposition {
  std::vector<int> core_number;
  int degeneracy = 0;
};

/// Core numbers in O(n + m) by bucket-ordered peeling. Edge directions and
/// weights are ignored.
CoreDecomposition core_decomposition(const SparseGraph& g);

struct InducedSubgraph {
  SparseGraph graph;
  std::vector<int> nodes;  // local index -> original id, ascending
};

/// Subgraph induced by {i : c(i) >= k}; empty when k exceeds the degeneracy.
InducedSubgraph extract_k_core(const SparseGraph& g, int k);
InducedSubgraph extract_k_core(const SparseGraph& g, const CoreDecomposition& cores, int k);

/// One wave of the propagation: unembedded neighbours V2 of the embedded set V1,
/// with A1^T and A2 rows normalized by the row sums of (A1^T | A2).
struct PropagationWave {
  std::vector<int> frontier;  // V2, ascending
  SparseMatrix from_embedded;  // |V2| x |V1|
  SparseMatrix within;         // |V2| x |V2|
};

PropagationWave propagation_wave(const SparseGraph& g, const std::vector<int>& embedded,
                                 const std::vector<char>& is_embedded);

/// Extends embeddings from `embedded` (row k of z1 belongs to embedded[k]) to
/// every node, wave by wave, running exactly t fixed-point iterations per wave.
/// Unreachable nodes receive uniform [-1, 1] vectors. Returns an n x d matrix.
Matrix propagate_embeddings(const SparseGraph& g, const std::vector<int>& embedded, const Matrix& z1, int t,
                            std::uint64_t seed);

/// Frobenius distances ||Z(t) - Z*|| for t = 0..t_max on the first wave, with Z*
/// from a dense solve. Z(0) is `z0` when given, otherwise seeded uniform [-1, 1].
std::vector<double> propagation_error_curve(const SparseGraph& g, const std::vector<int>& embedded,
                                            const Matrix& z1, int t_max, std::uint64_t seed,
                                            const Matrix* z0 = nullptr);

/// Dense fixed point (I - A2)^-1 A1 Z1 of the first wave.
Matrix propagation_fixed_point(const SparseGraph& g, const std::vector<int>& embedded, const Matrix& z1);

}  // namespace gae
