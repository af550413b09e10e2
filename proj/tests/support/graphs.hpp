#pragma once

#include <cstdint>
#include <vector>

#include "gae/graph.hpp"

namespace gae::testing {

SparseGraph make_graph(int n, const std::vector<std::pair<int, int>>& pairs, bool directed = false);

SparseGraph triangle();

/// Triangles {0,1,2} and {3,4,5} joined by the edge 2-3.
SparseGraph two_triangles_bridge();

/// Star with centre 0 and `leaves` leaves.
SparseGraph star(int leaves);

/// Two k-cliques {0..k-1} and {k..2k-1} joined by the edge (k-1, k).
SparseGraph two_cliques(int k);

/// Erdos-Renyi style graph with a spanning path so it is connected.
SparseGraph random_connected(int n, double p, std::uint64_t seed);

/// Ring plus about `extra_per_node` random chords per node; O(n) to build.
SparseGraph random_sparse(int n, int extra_per_node, std::uint64_t seed);

/// Random directed graph with both reciprocal and one-way arcs.
SparseGraph random_directed(int n, double p, double reciprocal, std::uint64_t seed);

/// Planted-partition graph: `blocks` groups of `size` nodes.
SparseGraph planted_partition(int blocks, int size, double p_in, double p_out, std::uint64_t seed,
                              bool directed = false);

/// All set partitions of n items as restricted growth strings.
std::vector<std::vector<int>> all_set_partitions(int n);

}  // namespace gae::testing
