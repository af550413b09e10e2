#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gae/clustering.hpp"
#include "gae/graph.hpp"
#include "gae/model.hpp"

namespace gae {

using NodePair = std::pair<int, int>;

enum class LinkTask { general, biased_negative, bidirectionality };
LinkTask parse_link_task(const std::string& name);
std::string to_string(LinkTask task);

struct EdgeSplit {
  LinkTask task = LinkTask::general;
  SparseGraph train;
  std::vector<NodePair> val_pos;
  std::vector<NodePair> val_neg;
  std::vector<NodePair> test_pos;
  std::vector<NodePair> test_neg;
};

struct SplitOptions {
  double val_frac = 0.05;
  double test_frac = 0.10;
  LinkTask task = LinkTask::general;
  std::uint64_t seed = 0;
  /// General task on directed graphs: allow (j,i) as a negative when (i,j) is an edge.
  bool negatives_include_reversals = false;
};

/// Masks round((val + test) * m) edges, split between validation and test in
/// proportion val : test, and pairs them with as many negatives.
///  - general: uniform edges; negatives uniform over unconnected pairs.
///  - biased_negative: unidirectional arcs only; negatives are their reversals.
///  - bidirectionality: one direction of every reciprocal pair is removed; the
///    test set holds those directions plus as many reversed unidirectional
///    arcs. Fractions are ignored and there is no validation set.
EdgeSplit split_edges(const SparseGraph& g, const SplitOptions& options);

/// Area under the ROC curve; tied scores count one half.
double auc(std::span<const double> scores, std::span<const int> labels);

/// Step-wise average precision. Tied scores form a single threshold, so a
/// group of equal scores contributes its combined precision.
double average_precision(std::span<const double> scores, std::span<const int> labels);

struct LinkScores {
  double auc = 0.0;
  double ap = 0.0;
};

/// AUC and AP of decoded probabilities on positive versus negative pairs.
LinkScores score_link_pairs(const Matrix& z, const DecoderConfig& decoder, std::span<const NodePair> positives,
                            std::span<const NodePair> negatives);

struct RankingMetrics {
  double recall = 0.0;
  double map = 0.0;
  double ndcg = 0.0;
};

/// Recall@K, MAP@K (mean precision at each hit) and NDCG@K with graded gains
/// and a log2 discount. `truth` pairs an item with its relevance weight.
RankingMetrics ranking_metrics(std::span<const int> predicted, std::span<const std::pair<int, double>> truth, int k);

/// Adjusted mutual information, arithmetic-mean normalization, hypergeometric
/// expected mutual information.
double ami(const Partition& a, const Partition& b);

/// Adjusted Rand index.
double ari(const Partition& a, const Partition& b);

struct SelectionCandidate {
  double val_auc = 0.0;
  double modularity = 0.0;
};

/// Index maximizing (val_auc + Q) / 2; ties go to the lowest index.
std::size_t select_hyperparameters(std::span<const SelectionCandidate> candidates);

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  std::size_t runs = 0;
};

Summary summarize(std::span<const double> values);

}  // namespace gae
