#include "graphs.hpp"

#include <random>
#include <set>
#include <utility>

namespace gaebench {
namespace {

gae::SparseGraph from_pairs(int n, const std::set<std::pair<int, int>>& pairs) {
  std::vector<gae::Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) edges.push_back({a, b, 1.0});
  return gae::SparseGraph::from_edges(n, false, edges);
}

void add(std::set<std::pair<int, int>>& pairs, int a, int b) {
  if (a != b) pairs.emplace(std::min(a, b), std::max(a, b));
}

}  // namespace

gae::SparseGraph ring_with_chords(int n, int chords, std::uint64_t seed) {
  gae::Rng rng(seed);
  std::uniform_int_distribution<int> node(0, n - 1);
  std::set<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) add(pairs, i, (i + 1) % n);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < chords; ++c) add(pairs, i, node(rng));
  }
  return from_pairs(n, pairs);
}

gae::SparseGraph core_with_trees(int n, std::uint64_t seed) {
  gae::Rng rng(seed);
  const int half = n / 2;
  std::uniform_int_distribution<int> core_node(0, half - 1);
  std::set<std::pair<int, int>> pairs;
  for (int i = 0; i < half; ++i) {
    add(pairs, i, (i + 1) % half);
    add(pairs, i, core_node(rng));
  }
  for (int i = half; i < n; ++i) add(pairs, i, std::uniform_int_distribution<int>(0, i - 1)(rng));
  return from_pairs(n, pairs);
}

gae::SparseGraph community_graph(int n, int blocks, double degree, double mixing, std::uint64_t seed) {
  gae::Rng rng(seed);
  const int size = n / blocks;
  std::uniform_int_distribution<int> any(0, n - 1);
  std::uniform_int_distribution<int> offset(0, size - 1);
  std::bernoulli_distribution across(mixing);
  std::set<std::pair<int, int>> pairs;
  const long long target = static_cast<long long>(degree * n / 2.0);
  while (static_cast<long long>(pairs.size()) < target) {
    const int a = any(rng);
    const int b = across(rng) ? any(rng) : (a / size) * size + offset(rng);
    if (b < n) add(pairs, a, b);
  }
  return from_pairs(n, pairs);
}

}  // namespace gaebench
