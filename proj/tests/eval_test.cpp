#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "gae/eval.hpp"
#include "support/graphs.hpp"

namespace gae {
namespace {

using testing::make_graph;

std::set<NodePair> as_set(const std::vector<NodePair>& v) { return {v.begin(), v.end()}; }

NodePair canonical(const NodePair& p) { return {std::min(p.first, p.second), std::max(p.first, p.second)}; }

TEST(SplitEdges, GeneralUndirectedPartitionsTheEdges) {
  const SparseGraph g = testing::random_connected(60, 0.1, 1);
  SplitOptions opts;
  opts.seed = 4;
  const EdgeSplit split = split_edges(g, opts);
  const auto masked = std::llround(0.15 * static_cast<double>(g.m()));
  EXPECT_EQ(static_cast<long long>(split.val_pos.size() + split.test_pos.size()), masked);
  EXPECT_EQ(static_cast<long long>(split.val_pos.size()), std::llround(masked / 3.0));
  EXPECT_EQ(split.val_neg.size(), split.val_pos.size());
  EXPECT_EQ(split.test_neg.size(), split.test_pos.size());

  std::multiset<NodePair> rebuilt;
  for (const Edge& e : split.train.edges()) rebuilt.insert(canonical({e.src, e.dst}));
  for (const auto& p : split.val_pos) rebuilt.insert(canonical(p));
  for (const auto& p : split.test_pos) rebuilt.insert(canonical(p));
  std::multiset<NodePair> original;
  for (const Edge& e : g.edges()) original.insert(canonical({e.src, e.dst}));
  EXPECT_EQ(rebuilt, original);

  for (const auto& p : split.test_pos) {
    EXPECT_FALSE(split.train.has_edge(p.first, p.second));
    EXPECT_FALSE(split.train.has_edge(p.second, p.first));
  }
  std::set<NodePair> negatives;
  for (const auto* set : {&split.val_neg, &split.test_neg}) {
    for (const auto& p : *set) {
      EXPECT_NE(p.first, p.second);
      EXPECT_FALSE(g.has_edge(p.first, p.second));
      EXPECT_TRUE(negatives.insert(canonical(p)).second);
    }
  }
  EXPECT_EQ(split_edges(g, opts).test_neg, split.test_neg);
}

TEST(SplitEdges, GeneralDirectedExcludesReversalsByDefault) {
  const SparseGraph g = testing::random_directed(40, 0.1, 0.3, 2);
  SplitOptions opts;
  opts.seed = 5;
  const EdgeSplit split = split_edges(g, opts);
  for (const auto* set : {&split.val_neg, &split.test_neg}) {
    for (const auto& [i, j] : *set) {
      EXPECT_FALSE(g.has_edge(i, j));
      EXPECT_FALSE(g.has_edge(j, i));
    }
  }
  for (const auto& [i, j] : split.val_pos) EXPECT_FALSE(split.train.has_edge(i, j));
  EXPECT_TRUE(as_set(split.val_pos).size() + as_set(split.test_pos).size() ==
              split.val_pos.size() + split.test_pos.size());
}

TEST(SplitEdges, BiasedNegativesAreReversals) {
  const SparseGraph g = testing::random_directed(50, 0.1, 0.3, 3);
  SplitOptions opts;
  opts.task = LinkTask::biased_negative;
  opts.seed = 6;
  const EdgeSplit split = split_edges(g, opts);
  ASSERT_FALSE(split.test_pos.empty());
  const std::set<NodePair> neg = as_set(split.test_neg);
  for (const auto& [i, j] : split.test_pos) {
    EXPECT_FALSE(g.has_edge(j, i));
    EXPECT_TRUE(neg.count({j, i}));
    EXPECT_FALSE(split.train.has_edge(i, j));
  }
  EXPECT_THROW(split_edges(testing::triangle(), opts), InvalidArgument);
}

TEST(SplitEdges, BidirectionalityLeavesNoReciprocalEdges) {
  const SparseGraph g = testing::random_directed(50, 0.1, 0.4, 4);
  SplitOptions opts;
  opts.task = LinkTask::bidirectionality;
  opts.seed = 7;
  const EdgeSplit split = split_edges(g, opts);
  for (const Edge& e : split.train.edges()) EXPECT_FALSE(split.train.has_edge(e.dst, e.src));
  EXPECT_TRUE(split.val_pos.empty());
  EXPECT_EQ(split.test_neg.size(), split.test_pos.size());
  for (const auto& [i, j] : split.test_pos) {
    EXPECT_TRUE(g.has_edge(i, j));
    EXPECT_TRUE(g.has_edge(j, i));
    EXPECT_TRUE(split.train.has_edge(j, i));
  }
  for (const auto& [i, j] : split.test_neg) {
    EXPECT_TRUE(g.has_edge(j, i));
    EXPECT_FALSE(g.has_edge(i, j));
  }
  EXPECT_THROW(split_edges(make_graph(3, {{0, 1}, {1, 2}}, true), opts), InvalidArgument);
}

TEST(SplitEdges, RejectsBadFractions) {
  SplitOptions opts;
  opts.val_frac = 0.6;
  opts.test_frac = 0.5;
  EXPECT_THROW(split_edges(testing::random_connected(10, 0.3, 1), opts), InvalidArgument);
}

TEST(Auc, Examples) {
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.9, 0.8, 0.2}, std::vector<int>{1, 1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.3, 0.3}, std::vector<int>{1, 0}), 0.5);
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.9, 0.8, 0.7, 0.1}, std::vector<int>{1, 0, 1, 0}), 0.75);
  EXPECT_THROW(auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}), InvalidArgument);
}

TEST(Auc, MatchesPairwiseOracleAndMonotoneTransforms) {
  Rng rng(9);
  std::uniform_int_distribution<int> bucket(0, 9);
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> scores;
    std::vector<int> labels;
    for (int i = 0; i < 50; ++i) {
      scores.push_back(bucket(rng) / 10.0);
      labels.push_back(coin(rng) ? 1 : 0);
    }
    labels[0] = 1;
    labels[1] = 0;
    double wins = 0;
    double total = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      for (std::size_t j = 0; j < scores.size(); ++j) {
        if (labels[i] != 1 || labels[j] != 0) continue;
        total += 1;
        wins += scores[i] > scores[j] ? 1.0 : (scores[i] == scores[j] ? 0.5 : 0.0);
      }
    }
    EXPECT_NEAR(auc(scores, labels), wins / total, 1e-14);
    std::vector<double> transformed;
    for (double s : scores) transformed.push_back(std::exp(3 * s) - 7);
    EXPECT_EQ(auc(transformed, labels), auc(scores, labels));
  }
}

TEST(AveragePrecision, Examples) {
  EXPECT_DOUBLE_EQ(average_precision(std::vector<double>{0.9, 0.8, 0.1}, std::vector<int>{1, 1, 0}), 1.0);
  EXPECT_NEAR(average_precision(std::vector<double>{0.9, 0.5, 0.2}, std::vector<int>{1, 0, 1}), 5.0 / 6.0, 1e-15);
  EXPECT_DOUBLE_EQ(average_precision(std::vector<double>{0.2, 0.4}, std::vector<int>{1, 1}), 1.0);
  EXPECT_THROW(average_precision(std::vector<double>{0.2}, std::vector<int>{0}), InvalidArgument);
}

TEST(AveragePrecision, SymmetricScoresGiveOneHalf) {
  // Every positive paired with a negative of identical score.
  std::vector<double> scores;
  std::vector<int> labels;
  Rng rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const double s = u(rng);
    scores.insert(scores.end(), {s, s});
    labels.insert(labels.end(), {1, 0});
  }
  EXPECT_EQ(average_precision(scores, labels), 0.5);
  EXPECT_EQ(auc(scores, labels), 0.5);
}

TEST(RankingMetrics, Examples) {
  std::vector<std::pair<int, double>> truth;
  for (int i = 0; i < 20; ++i) truth.emplace_back(i, 1.0);
  std::vector<int> predicted;
  for (int i = 0; i < 5; ++i) predicted.push_back(i);
  for (int i = 100; i < 115; ++i) predicted.push_back(i);
  EXPECT_DOUBLE_EQ(ranking_metrics(predicted, truth, 20).recall, 0.25);

  const std::vector<std::pair<int, double>> graded = {{4, 3.0}, {2, 2.0}, {9, 1.0}};
  EXPECT_DOUBLE_EQ(ranking_metrics(std::vector<int>{4, 2, 9}, graded, 3).ndcg, 1.0);
  EXPECT_LT(ranking_metrics(std::vector<int>{9, 2, 4}, graded, 3).ndcg, 1.0);

  const std::vector<std::pair<int, double>> single = {{7, 1.0}};
  const RankingMetrics r = ranking_metrics(std::vector<int>{3, 7}, single, 2);
  EXPECT_DOUBLE_EQ(r.map, 0.5);
  EXPECT_DOUBLE_EQ(r.recall, 1.0);
  EXPECT_THROW(ranking_metrics(std::vector<int>{1}, std::vector<std::pair<int, double>>{}, 1), InvalidArgument);
}

TEST(Ami, IdentityRelabelingAndNull) {
  const Partition a = Partition::from_labels({0, 0, 1, 1, 2, 2, 2});
  const Partition relabeled = Partition::from_labels({5, 5, 3, 3, 9, 9, 9});
  EXPECT_DOUBLE_EQ(ami(a, a), 1.0);
  EXPECT_DOUBLE_EQ(ami(a, relabeled), 1.0);
  Rng rng(3);
  std::uniform_int_distribution<int> label(0, 9);
  std::vector<int> x(10000);
  std::vector<int> y(10000);
  for (int i = 0; i < 10000; ++i) {
    x[i] = label(rng);
    y[i] = label(rng);
  }
  const Partition px = Partition::from_labels(x);
  const Partition py = Partition::from_labels(y);
  EXPECT_LT(std::abs(ami(px, py)), 0.01);
  EXPECT_NEAR(ami(px, py), ami(py, px), 1e-12);
  EXPECT_LT(std::abs(ari(px, py)), 0.01);
  EXPECT_NEAR(ari(px, py), ari(py, px), 1e-12);
}

TEST(Ari, Examples) {
  const Partition a = Partition::from_labels({0, 1, 0, 2});
  EXPECT_DOUBLE_EQ(ari(a, a), 1.0);
  EXPECT_DOUBLE_EQ(ari(Partition::singletons(4), Partition::from_labels({0, 0, 0, 0})), 0.0);
  // Known value: labels [0,0,1,1] vs [0,0,1,2].
  EXPECT_NEAR(ari(Partition::from_labels({0, 0, 1, 1}), Partition::from_labels({0, 0, 1, 2})), 4.0 / 7.0, 1e-12);
}

TEST(Ami, KnownValue) {
  // Reference value for [0,0,1,1] vs [0,0,1,2] under arithmetic normalization.
  EXPECT_NEAR(ami(Partition::from_labels({0, 0, 1, 1}), Partition::from_labels({0, 0, 1, 2})), 0.5714285714285715,
              1e-9);
}

TEST(SelectHyperparameters, Examples) {
  const std::vector<SelectionCandidate> one = {{0.7, 0.3}};
  EXPECT_EQ(select_hyperparameters(one), 0u);
  const std::vector<SelectionCandidate> dominated = {{0.6, 0.2}, {0.9, 0.5}, {0.7, 0.4}};
  EXPECT_EQ(select_hyperparameters(dominated), 1u);
  const std::vector<SelectionCandidate> close = {{0.80, 0.40}, {0.70, 0.52}};
  EXPECT_EQ(select_hyperparameters(close), 1u);
  const std::vector<SelectionCandidate> tied = {{0.5, 0.5}, {0.5, 0.5}};
  EXPECT_EQ(select_hyperparameters(tied), 0u);
}

TEST(Summarize, PopulationStd) {
  const Summary s = summarize(std::vector<double>{1.0, 3.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_DOUBLE_EQ(s.std, 1.0);
  EXPECT_EQ(s.runs, 2u);
}

}  // namespace
}  // namespace gae
