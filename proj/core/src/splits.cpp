#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "gae/eval.hpp"

namespace gae {

LinkTask parse_link_task(const std::string& name) {
  if (name == "general") return LinkTask::general;
  if (name == "biased_negative") return LinkTask::biased_negative;
  if (name == "bidirectionality") return LinkTask::bidirectionality;
  throw InvalidArgument("unknown link task '" + name + "' (expected general, biased_negative or bidirectionality)");
}

std::string to_string(LinkTask task) {
  switch (task) {
    case LinkTask::general: return "general";
    case LinkTask::biased_negative: return "biased_negative";
    case LinkTask::bidirectionality: return "bidirectionality";
  }
  return "unknown";
}

namespace {

std::uint64_t pair_key(int i, int j) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) | static_cast<std::uint32_t>(j);
}

struct MaskCounts {
  std::size_t val = 0;
  std::size_t test = 0;
};

MaskCounts mask_counts(std::int64_t m, double val_frac, double test_frac) {
  if (!(val_frac >= 0.0) || !(test_frac >= 0.0) || !(val_frac + test_frac < 1.0)) {
    throw InvalidArgument("split fractions must be non-negative with val + test < 1");
  }
  const double total = val_frac + test_frac;
  MaskCounts c;
  if (total == 0.0) return c;
  const auto masked = static_cast<std::size_t>(std::llround(total * static_cast<double>(m)));
  c.val = static_cast<std::size_t>(std::llround(static_cast<double>(masked) * val_frac / total));
  c.test = masked - c.val;
  return c;
}

SparseGraph without(const SparseGraph& g, const std::vector<Edge>& edges, const std::vector<char>& removed) {
  std::vector<Edge> kept;
  kept.reserve(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (!removed[k]) kept.push_back(edges[k]);
  }
  return SparseGraph::from_edges(g.n(), g.directed(), kept);
}

// Distinct pairs not connected in g. Undirected pairs are returned with i < j.
std::vector<NodePair> draw_negatives(const SparseGraph& g, std::size_t count, bool include_reversals, Rng& rng) {
  const auto n = static_cast<std::int64_t>(g.n());
  const bool ordered = g.directed();
  auto excluded = [&](int i, int j) {
    if (g.has_edge(i, j)) return true;
    return ordered && !include_reversals && g.has_edge(j, i);
  };
  std::int64_t blocked = 0;
  if (!ordered) {
    blocked = g.m();
  } else if (include_reversals) {
    blocked = g.m();
  } else {
    blocked = 2 * g.symmetrized().m();
  }
  const std::int64_t pairs = ordered ? n * (n - 1) : n * (n - 1) / 2;
  const std::int64_t available = pairs - blocked;
  if (static_cast<std::int64_t>(count) > available) {
    throw InvalidArgument("not enough unconnected node pairs for " + std::to_string(count) + " negatives");
  }
  std::vector<NodePair> out;
  out.reserve(count);
  if (static_cast<std::int64_t>(count) * 2 > available) {
    std::vector<NodePair> all;
    for (int i = 0; i < g.n(); ++i) {
      for (int j = ordered ? 0 : i + 1; j < g.n(); ++j) {
        if (i != j && !excluded(i, j)) all.emplace_back(i, j);
      }
    }
    std::shuffle(all.begin(), all.end(), rng);
    out.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count));
    return out;
  }
  std::unordered_set<std::uint64_t> seen;
  std::uniform_int_distribution<int> node(0, g.n() - 1);
  while (out.size() < count) {
    int i = node(rng);
    int j = node(rng);
    if (i == j) continue;
    if (!ordered && i > j) std::swap(i, j);
    if (excluded(i, j) || !seen.insert(pair_key(i, j)).second) continue;
    out.emplace_back(i, j);
  }
  return out;
}

EdgeSplit split_general(const SparseGraph& g, const SplitOptions& opt, Rng& rng) {
  const std::vector<Edge> edges = g.edges();
  const MaskCounts c = mask_counts(static_cast<std::int64_t>(edges.size()), opt.val_frac, opt.test_frac);
  if (c.val + c.test > edges.size()) throw InvalidArgument("not enough edges to mask");
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  EdgeSplit split;
  std::vector<char> removed(edges.size(), 0);
  for (std::size_t k = 0; k < c.val + c.test; ++k) {
    const Edge& e = edges[order[k]];
    removed[order[k]] = 1;
    (k < c.val ? split.val_pos : split.test_pos).emplace_back(e.src, e.dst);
  }
  split.train = without(g, edges, removed);
  const std::vector<NodePair> neg = draw_negatives(g, c.val + c.test, opt.negatives_include_reversals, rng);
  split.val_neg.assign(neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(c.val));
  split.test_neg.assign(neg.begin() + static_cast<std::ptrdiff_t>(c.val), neg.end());
  return split;
}

EdgeSplit split_biased_negative(const SparseGraph& g, const SplitOptions& opt, Rng& rng) {
  if (!g.directed()) throw InvalidArgument("biased_negative split requires a directed graph");
  const std::vector<Edge> edges = g.edges();
  std::vector<std::size_t> uni;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (!g.has_edge(edges[k].dst, edges[k].src)) uni.push_back(k);
  }
  const MaskCounts c = mask_counts(g.m(), opt.val_frac, opt.test_frac);
  if (c.val + c.test > uni.size()) {
    throw InvalidArgument("biased_negative split needs " + std::to_string(c.val + c.test) +
                          " unidirectional arcs, graph has " + std::to_string(uni.size()));
  }
  std::shuffle(uni.begin(), uni.end(), rng);
  EdgeSplit split;
  std::vector<char> removed(edges.size(), 0);
  for (std::size_t k = 0; k < c.val + c.test; ++k) {
    const Edge& e = edges[uni[k]];
    removed[uni[k]] = 1;
    const bool val = k < c.val;
    (val ? split.val_pos : split.test_pos).emplace_back(e.src, e.dst);
    (val ? split.val_neg : split.test_neg).emplace_back(e.dst, e.src);
  }
  split.train = without(g, edges, removed);
  return split;
}

EdgeSplit split_bidirectionality(const SparseGraph& g, Rng& rng) {
  if (!g.directed()) throw InvalidArgument("bidirectionality split requires a directed graph");
  const std::vector<Edge> edges = g.edges();
  std::vector<std::size_t> reciprocal;  // arcs (i, j) with i < j and (j, i) present
  std::vector<std::size_t> uni;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    if (g.has_edge(e.dst, e.src)) {
      if (e.src < e.dst) reciprocal.push_back(k);
    } else {
      uni.push_back(k);
    }
  }
  if (reciprocal.empty()) throw InvalidArgument("bidirectionality split requires at least one reciprocal edge");
  if (uni.size() < reciprocal.size()) {
    throw InvalidArgument("bidirectionality split needs " + std::to_string(reciprocal.size()) +
                          " unidirectional arcs, graph has " + std::to_string(uni.size()));
  }
  EdgeSplit split;
  std::vector<Edge> kept;
  kept.reserve(edges.size() - reciprocal.size());
  std::unordered_set<std::uint64_t> drop;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t k : reciprocal) {
    const Edge& e = edges[k];
    const bool forward = coin(rng);
    const int src = forward ? e.src : e.dst;
    const int dst = forward ? e.dst : e.src;
    drop.insert(pair_key(src, dst));
    split.test_pos.emplace_back(src, dst);
  }
  for (const Edge& e : edges) {
    if (!drop.count(pair_key(e.src, e.dst))) kept.push_back(e);
  }
  split.train = SparseGraph::from_edges(g.n(), true, kept);
  std::shuffle(uni.begin(), uni.end(), rng);
  for (std::size_t k = 0; k < reciprocal.size(); ++k) {
    const Edge& e = edges[uni[k]];
    split.test_neg.emplace_back(e.dst, e.src);
  }
  return split;
}

}  // namespace

EdgeSplit split_edges(const SparseGraph& g, const SplitOptions& options) {
  if (g.m() == 0) throw InvalidArgument("cannot split a graph without edges");
  Rng rng(options.seed);
  EdgeSplit split;
  switch (options.task) {
    case LinkTask::general: split = split_general(g, options, rng); break;
    case LinkTask::biased_negative: split = split_biased_negative(g, options, rng); break;
    case LinkTask::bidirectionality: split = split_bidirectionality(g, rng); break;
  }
  split.task = options.task;
  return split;
}

}  // namespace gae
