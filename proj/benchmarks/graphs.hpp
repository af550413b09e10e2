#pragma once

#include <cstdint>

#include "gae/graph.hpp"

namespace gaebench {

/// Ring plus `chords` random chords per node; O(n) edges, always connected.
gae::SparseGraph ring_with_chords(int n, int chords, std::uint64_t seed);

/// Ring-with-chords core on the first n/2 nodes; every later node hangs off a
/// uniformly chosen earlier node, so the remaining half forms trees with core number 1.
gae::SparseGraph core_with_trees(int n, std::uint64_t seed);

/// Equal-sized blocks with dense inside and sparse across; expected degree about `degree`.
gae::SparseGraph community_graph(int n, int blocks, double degree, double mixing, std::uint64_t seed);

}  // namespace gaebench
