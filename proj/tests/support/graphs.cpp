#include "graphs.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

namespace gae::testing {

SparseGraph make_graph(int n, const std::vector<std::pair<int, int>>& pairs, bool directed) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [u, v] : pairs) edges.push_back({u, v, 1.0});
  return SparseGraph::from_edges(n, directed, edges);
}

SparseGraph triangle() { return make_graph(3, {{0, 1}, {1, 2}, {0, 2}}); }

SparseGraph two_triangles_bridge() {
  return make_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
}

SparseGraph star(int leaves) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= leaves; ++i) pairs.emplace_back(0, i);
  return make_graph(leaves + 1, pairs);
}

SparseGraph two_cliques(int k) {
  std::vector<std::pair<int, int>> pairs;
  for (int base : {0, k}) {
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) pairs.emplace_back(base + i, base + j);
    }
  }
  pairs.emplace_back(k - 1, k);
  return make_graph(2 * k, pairs);
}

SparseGraph random_connected(int n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::set<std::pair<int, int>> pairs;
  for (int i = 1; i < n; ++i) {
    const int a = perm[i - 1];
    const int b = perm[i];
    pairs.emplace(std::min(a, b), std::max(a, b));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (coin(rng)) pairs.emplace(i, j);
    }
  }
  return make_graph(n, {pairs.begin(), pairs.end()});
}

SparseGraph random_sparse(int n, int extra_per_node, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::set<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    if (i != j) pairs.emplace(std::min(i, j), std::max(i, j));
    for (int e = 0; e < extra_per_node; ++e) {
      const int k = pick(rng);
      if (k != i) pairs.emplace(std::min(i, k), std::max(i, k));
    }
  }
  return make_graph(n, {pairs.begin(), pairs.end()});
}

SparseGraph random_directed(int n, double p, double reciprocal, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution edge(p);
  std::bernoulli_distribution both(reciprocal);
  std::bernoulli_distribution forward(0.5);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!edge(rng)) continue;
      if (both(rng)) {
        pairs.emplace_back(i, j);
        pairs.emplace_back(j, i);
      } else if (forward(rng)) {
        pairs.emplace_back(i, j);
      } else {
        pairs.emplace_back(j, i);
      }
    }
  }
  return make_graph(n, pairs, true);
}

SparseGraph planted_partition(int blocks, int size, double p_in, double p_out, std::uint64_t seed, bool directed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = blocks * size;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      const double p = (i / size == j / size) ? p_in : p_out;
      if (u(rng) < p) pairs.emplace_back(i, j);
    }
  }
  return make_graph(n, pairs, directed);
}

std::vector<std::vector<int>> all_set_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int max_label) {
    if (i == n) {
      out.push_back(labels);
      return;
    }
    for (int c = 0; c <= max_label + 1; ++c) {
      labels[i] = c;
      rec(i + 1, std::max(max_label, c));
    }
  };
  if (n == 0) return {{}};
  labels[0] = 0;
  rec(1, 0);
  return out;
}

}  // namespace gae::testing
