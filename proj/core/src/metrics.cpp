#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "gae/eval.hpp"

namespace gae {
namespace {

struct Counts {
  double pos = 0.0;
  double neg = 0.0;
};

// Score groups in descending order, each with its class counts.
std::vector<Counts> descending_groups(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores[i])) throw NumericError("scores contain NaN");
    if (labels[i] != 0 && labels[i] != 1) throw InvalidArgument("labels must be 0 or 1");
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<Counts> groups;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || scores[order[k]] != scores[order[k - 1]]) groups.emplace_back();
    (labels[order[k]] == 1 ? groups.back().pos : groups.back().neg) += 1.0;
  }
  return groups;
}

struct Cell {
  int row = 0;
  int col = 0;
  double count = 0.0;
};

struct Contingency {
  std::vector<double> a;  // row sums
  std::vector<double> b;  // column sums
  std::vector<Cell> cells;
  double n = 0.0;
};

Contingency contingency(const Partition& p, const Partition& q) {
  if (p.n() != q.n()) throw InvalidArgument("partitions cover different node counts");
  if (p.n() < 2) throw InvalidArgument("partition comparison needs at least two nodes");
  const Partition pd = Partition::from_labels(p.assignment);
  const Partition qd = Partition::from_labels(q.assignment);
  Contingency c;
  c.a.assign(static_cast<std::size_t>(pd.k), 0.0);
  c.b.assign(static_cast<std::size_t>(qd.k), 0.0);
  std::unordered_map<std::uint64_t, double> cells;
  for (int i = 0; i < p.n(); ++i) {
    const int r = pd.assignment[i];
    const int s = qd.assignment[i];
    c.a[r] += 1.0;
    c.b[s] += 1.0;
    cells[static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(qd.k) + static_cast<std::uint64_t>(s)] += 1.0;
  }
  c.cells.reserve(cells.size());
  const auto cols = static_cast<std::uint64_t>(qd.k);
  for (const auto& [key, v] : cells) c.cells.push_back({static_cast<int>(key / cols), static_cast<int>(key % cols), v});
  c.n = static_cast<double>(p.n());
  return c;
}

bool equivalent(const Partition& p, const Partition& q) {
  return Partition::from_labels(p.assignment).assignment == Partition::from_labels(q.assignment).assignment;
}

double entropy(const std::vector<double>& sizes, double n) {
  double h = 0.0;
  for (double s : sizes) {
    if (s > 0.0) h -= (s / n) * std::log(s / n);
  }
  return h;
}

double expected_mutual_information(const std::vector<double>& a, const std::vector<double>& b, double n) {
  const double lg_n = std::lgamma(n + 1.0);
  double emi = 0.0;
  for (double ai : a) {
    for (double bj : b) {
      const double lo = std::max(1.0, ai + bj - n);
      const double hi = std::min(ai, bj);
      const double base = std::lgamma(ai + 1.0) + std::lgamma(bj + 1.0) + std::lgamma(n - ai + 1.0) +
                          std::lgamma(n - bj + 1.0) - lg_n;
      for (double nij = lo; nij <= hi; nij += 1.0) {
        const double log_p = base - std::lgamma(nij + 1.0) - std::lgamma(ai - nij + 1.0) -
                             std::lgamma(bj - nij + 1.0) - std::lgamma(n - ai - bj + nij + 1.0);
        emi += (nij / n) * std::log(n * nij / (ai * bj)) * std::exp(log_p);
      }
    }
  }
  return emi;
}

double choose2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

double auc(std::span<const double> scores, std::span<const int> labels) {
  const std::vector<Counts> groups = descending_groups(scores, labels);
  double pos = 0.0;
  double neg = 0.0;
  for (const Counts& g : groups) {
    pos += g.pos;
    neg += g.neg;
  }
  if (pos == 0.0 || neg == 0.0) throw InvalidArgument("auc needs both positive and negative labels");
  // Walk from the lowest scores up, counting negatives strictly below each group.
  double below = 0.0;
  double wins = 0.0;
  for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
    wins += it->pos * (below + 0.5 * it->neg);
    below += it->neg;
  }
  return wins / (pos * neg);
}

double average_precision(std::span<const double> scores, std::span<const int> labels) {
  const std::vector<Counts> groups = descending_groups(scores, labels);
  double tp = 0.0;
  double seen = 0.0;
  double sum = 0.0;
  for (const Counts& g : groups) {
    tp += g.pos;
    seen += g.pos + g.neg;
    sum += g.pos * (tp / seen);
  }
  if (tp == 0.0) throw InvalidArgument("average precision needs at least one positive label");
  return sum / tp;
}

LinkScores score_link_pairs(const Matrix& z, const DecoderConfig& decoder, std::span<const NodePair> positives,
                            std::span<const NodePair> negatives) {
  std::vector<double> scores = decode(z, positives, decoder);
  const std::vector<double> neg = decode(z, negatives, decoder);
  std::vector<int> labels(scores.size(), 1);
  scores.insert(scores.end(), neg.begin(), neg.end());
  labels.resize(scores.size(), 0);
  return {auc(scores, labels), average_precision(scores, labels)};
}

RankingMetrics ranking_metrics(std::span<const int> predicted, std::span<const std::pair<int, double>> truth, int k) {
  if (k < 1) throw InvalidArgument("ranking metrics need K >= 1");
  if (truth.empty()) throw InvalidArgument("ranking metrics need a non-empty ground truth");
  std::unordered_map<int, double> gain;
  for (const auto& [item, w] : truth) {
    if (!gain.emplace(item, w).second) throw InvalidArgument("ground truth lists an item twice");
  }
  RankingMetrics r;
  std::unordered_set<int> hit;
  double precision_sum = 0.0;
  double dcg = 0.0;
  const std::size_t depth = std::min(predicted.size(), static_cast<std::size_t>(k));
  for (std::size_t pos = 0; pos < depth; ++pos) {
    const auto it = gain.find(predicted[pos]);
    if (it == gain.end() || !hit.insert(predicted[pos]).second) continue;
    precision_sum += static_cast<double>(hit.size()) / static_cast<double>(pos + 1);
    dcg += it->second / std::log2(static_cast<double>(pos) + 2.0);
  }
  std::vector<double> ideal;
  ideal.reserve(truth.size());
  for (const auto& [item, w] : truth) ideal.push_back(w);
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  double idcg = 0.0;
  for (std::size_t pos = 0; pos < std::min(ideal.size(), static_cast<std::size_t>(k)); ++pos) {
    idcg += ideal[pos] / std::log2(static_cast<double>(pos) + 2.0);
  }
  r.recall = static_cast<double>(hit.size()) / static_cast<double>(truth.size());
  r.map = hit.empty() ? 0.0 : precision_sum / static_cast<double>(hit.size());
  r.ndcg = idcg > 0.0 ? dcg / idcg : 0.0;
  return r;
}

double ami(const Partition& p, const Partition& q) {
  const Contingency c = contingency(p, q);
  if (equivalent(p, q)) return 1.0;
  double mi = 0.0;
  for (const Cell& cell : c.cells) {
    mi += (cell.count / c.n) * std::log(c.n * cell.count / (c.a[cell.row] * c.b[cell.col]));
  }
  const double emi = expected_mutual_information(c.a, c.b, c.n);
  const double mean_h = 0.5 * (entropy(c.a, c.n) + entropy(c.b, c.n));
  double denom = mean_h - emi;
  const double eps = std::numeric_limits<double>::epsilon();
  denom = denom < 0.0 ? std::min(denom, -eps) : std::max(denom, eps);
  return (mi - emi) / denom;
}

double ari(const Partition& p, const Partition& q) {
  const Contingency c = contingency(p, q);
  if (equivalent(p, q)) return 1.0;
  double index = 0.0;
  for (const Cell& cell : c.cells) index += choose2(cell.count);
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (double v : c.a) sum_a += choose2(v);
  for (double v : c.b) sum_b += choose2(v);
  const double expected = sum_a * sum_b / choose2(c.n);
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 0.0;
  return (index - expected) / (max_index - expected);
}

std::size_t select_hyperparameters(std::span<const SelectionCandidate> candidates) {
  if (candidates.empty()) throw InvalidArgument("hyperparameter selection needs at least one candidate");
  std::size_t best = 0;
  double best_score = 0.5 * (candidates[0].val_auc + candidates[0].modularity);
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    const double score = 0.5 * (candidates[k].val_auc + candidates[k].modularity);
    if (score > best_score) {
      best = k;
      best_score = score;
    }
  }
  return best;
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("cannot summarize an empty list of values");
  Summary s;
  s.runs = values.size();
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(var / static_cast<double>(values.size()));
  return s;
}

}  // namespace gae
