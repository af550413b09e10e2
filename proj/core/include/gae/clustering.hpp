#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "gae/common.hpp"
#include "gae/graph.hpp"
#include "gae/operator.hpp"

namespace gae {

/// Hard assignment of n nodes to K communities with dense ids 0..K-1.
struct Partition {
  std::vector<int> assignment;
  int k = 0;

  int n() const { return static_cast<int>(assignment.size()); }

  /// Relabels arbitrary non-negative labels densely, in order of first use.
  static Partition from_labels(const std::vector<int>& labels);
  static Partition singletons(int n);

  /// Node lists per community, each ascending.
  std::vector<std::vector<int>> communities() const;
  bool operator==(const Partition& other) const = default;
};

/// Q = (1/2m) sum_ij [A_ij - d_i d_j / 2m] delta(c_i, c_j) with weighted degrees.
double modularity(const SparseGraph& g, const Partition& partition);

struct LouvainOptions {
  /// Node visiting order; ascending ids when empty, shuffled from the seed otherwise.
  std::optional<std::uint64_t> shuffle_seed;
  /// Minimal modularity gain accepted for a move.
  double min_gain = 1e-12;
};

/// Every level of the Louvain hierarchy, finest first, mapped back to the
/// original nodes. Gain ties keep the node in its current community.
std::vector<Partition> louvain(const SparseGraph& g, const LouvainOptions& options = {});

struct MembershipOperators {
  SparseGraph a_c;  // M M^T - I: complete graph on every community
  SparseGraph a_s;  // sparsified a_c, sampled once
  int s = 1;
  double lambda_enc = 1.0;
};

/// Builds A_c and its s-regular sparsification: each node is joined to
/// min(s, n_k - 1) distinct same-community nodes drawn uniformly, then the
/// result is symmetrized.
MembershipOperators membership_operators(const Partition& partition, int s, double lambda_enc, std::uint64_t seed);

/// max_k || F v_k - v_k ||_inf over the community indicators v_k.
double indicator_eigencheck(const Operator& op, const Partition& partition);

struct KMeansResult {
  Partition partition;
  Matrix centroids;                  // K x d
  double inertia = 0.0;
  std::vector<double> inertia_trace;  // after each Lloyd iteration
  int iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding, at most max_iters iterations.
KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iters = 300);

/// TSV "node<TAB>community".
void write_partition(std::ostream& out, const Partition& partition);
Partition read_partition(std::istream& in);

}  // namespace gae
