#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gae/graph.hpp"

namespace gae {

enum class ImportanceMethod { uniform, degree, core };

ImportanceMethod parse_importance_method(const std::string& name);
std::string to_string(ImportanceMethod method);

struct SamplingConfig {
  ImportanceMethod method = ImportanceMethod::degree;
  double alpha = 1.0;
  int size = 0;
  bool with_replacement = false;
  std::uint64_t seed = 0;
};

/// f(i): all ones, weighted degree, or core number.
std::vector<double> importance_scores(const SparseGraph& g, ImportanceMethod method);

/// p_i = f(i)^alpha / sum_j f(j)^alpha with 0^0 = 1.
std::vector<double> sampling_distribution(std::span<const double> scores, double alpha);

struct NodeSample {
  std::vector<int> nodes;  // draw order; distinct
  SparseGraph graph;       // induced subgraph, local ids follow `nodes`
};

/// Draws n_S nodes. Without replacement the law is that of sequential draws
/// renormalized over the remaining nodes; with replacement the distinct
/// nodes of n_S independent draws are kept.
NodeSample sample_subgraph(const SparseGraph& g, std::span<const double> p, int n_s, bool with_replacement,
                           std::uint64_t seed);

/// Node ids only; same law as sample_subgraph.
std::vector<int> sample_nodes(std::span<const double> p, int n_s, bool with_replacement, Rng& rng);

struct ThresholdParams {
  double gamma_dev = 1.0;
  double conf = 0.1;
  double eps_cap = 0.001;
};

/// C in n* = C * sqrt(n).
double threshold_constant(const ThresholdParams& params);

/// Unrounded C * sqrt(n).
double subgraph_size_bound(int n, const ThresholdParams& params);

/// C * sqrt(n) rounded to the nearest integer and clipped to [1, n].
int recommended_subgraph_size(int n, const ThresholdParams& params);

/// Probability that node i appears among n_S draws with replacement.
double inclusion_probability_with_replacement(double p_i, int n_s);

}  // namespace gae
