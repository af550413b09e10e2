#include "gae/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "gae/degeneracy.hpp"

namespace gae {

ImportanceMethod parse_importance_method(const std::string& name) {
  if (name == "uniform") return ImportanceMethod::uniform;
  if (name == "degree") return ImportanceMethod::degree;
  if (name == "core") return ImportanceMethod::core;
  throw InvalidArgument("unknown sampling method '" + name + "' (expected uniform, degree or core)");
}

std::string to_string(ImportanceMethod method) {
  switch (method) {
    case ImportanceMethod::uniform: return "uniform";
    case ImportanceMethod::degree: return "degree";
    case ImportanceMethod::core: return "core";
  }
  return "unknown";
}

std::vector<double> importance_scores(const SparseGraph& g, ImportanceMethod method) {
  std::vector<double> f(static_cast<std::size_t>(g.n()), 1.0);
  if (method == ImportanceMethod::degree) {
    for (int i = 0; i < g.n(); ++i) f[i] = g.weighted_degree(i);
  } else if (method == ImportanceMethod::core) {
    const CoreDecomposition cores = core_decomposition(g);
    for (int i = 0; i < g.n(); ++i) f[i] = cores.core_number[i];
  }
  return f;
}

std::vector<double> sampling_distribution(std::span<const double> scores, double alpha) {
  if (!(alpha >= 0.0)) throw InvalidArgument("sampling: alpha must be non-negative");
  std::vector<double> p(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!(scores[i] >= 0.0) || !std::isfinite(scores[i])) {
      throw InvalidArgument("sampling: scores must be finite and non-negative");
    }
    p[i] = alpha == 0.0 ? 1.0 : std::pow(scores[i], alpha);
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (!(total > 0.0)) throw InvalidArgument("sampling: all importance scores are zero");
  for (double& v : p) v /= total;
  return p;
}

std::vector<int> sample_nodes(std::span<const double> p, int n_s, bool with_replacement, Rng& rng) {
  const int n = static_cast<int>(p.size());
  if (n_s < 1) throw InvalidArgument("sampling: subgraph size must be at least 1");
  std::vector<int> out;
  if (with_replacement) {
    std::discrete_distribution<int> draw(p.begin(), p.end());
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < n_s; ++k) {
      const int v = draw(rng);
      if (!seen[v]) {
        seen[v] = 1;
        out.push_back(v);
      }
    }
    return out;
  }
  if (n_s > n) {
    throw InvalidArgument("sampling: cannot draw " + std::to_string(n_s) + " distinct nodes from " +
                          std::to_string(n));
  }
  const auto positive = std::count_if(p.begin(), p.end(), [](double v) { return v > 0.0; });
  if (positive < n_s) {
    throw InvalidArgument("sampling: only " + std::to_string(positive) + " nodes have non-zero probability");
  }
  // Sorting by E_i / p_i with E_i ~ Exp(1) reproduces sequential draws with
  // renormalization over the remaining nodes.
  std::exponential_distribution<double> expo(1.0);
  std::vector<std::pair<double, int>> keys;
  keys.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double e = expo(rng);
    if (p[i] > 0.0) keys.emplace_back(e / p[i], i);
  }
  std::partial_sort(keys.begin(), keys.begin() + n_s, keys.end());
  out.reserve(static_cast<std::size_t>(n_s));
  for (int k = 0; k < n_s; ++k) out.push_back(keys[k].second);
  return out;
}

NodeSample sample_subgraph(const SparseGraph& g, std::span<const double> p, int n_s, bool with_replacement,
                           std::uint64_t seed) {
  if (static_cast<int>(p.size()) != g.n()) throw InvalidArgument("sampling: probability vector size mismatch");
  Rng rng(seed);
  NodeSample s;
  s.nodes = sample_nodes(p, n_s, with_replacement, rng);
  s.graph = g.induced(s.nodes);
  return s;
}

double threshold_constant(const ThresholdParams& params) {
  if (!(params.gamma_dev > 0.0)) throw InvalidArgument("threshold: gamma must be positive");
  if (!(params.conf > 0.0 && params.conf < 1.0)) throw InvalidArgument("threshold: confidence must lie in (0, 1)");
  if (!(params.eps_cap > 0.0 && params.eps_cap < 1.0)) throw InvalidArgument("threshold: epsilon must lie in (0, 1)");
  const double log_eps = std::log(params.eps_cap);
  return std::sqrt(-std::log(params.conf / 2.0) * log_eps * log_eps / (2.0 * params.gamma_dev * params.gamma_dev));
}

double subgraph_size_bound(int n, const ThresholdParams& params) {
  if (n < 1) throw InvalidArgument("threshold: n must be positive");
  return threshold_constant(params) * std::sqrt(static_cast<double>(n));
}

int recommended_subgraph_size(int n, const ThresholdParams& params) {
  const double raw = subgraph_size_bound(n, params);
  const auto rounded = static_cast<long long>(std::llround(raw));
  return static_cast<int>(std::clamp<long long>(rounded, 1, n));
}

double inclusion_probability_with_replacement(double p_i, int n_s) {
  return 1.0 - std::pow(1.0 - p_i, n_s);
}

}  // namespace gae
