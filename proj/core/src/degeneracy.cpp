#include "gae/degeneracy.hpp"

#include <algorithm>
#include <random>

namespace gae {

CoreDecomposition core_decomposition(const SparseGraph& g) {
  SparseGraph mirrored;
  if (g.directed()) mirrored = g.symmetrized();
  const SparseGraph& und = g.directed() ? mirrored : g;
  const int n = und.n();
  CoreDecomposition out;
  out.core_number.assign(static_cast<std::size_t>(n), 0);
  if (n == 0) return out;

  std::vector<int> deg(n);
  int max_deg = 0;
  for (int i = 0; i < n; ++i) {
    deg[i] = und.degree(i);
    max_deg = std::max(max_deg, deg[i]);
  }
  // bin[d] = first position of degree-d nodes in `order`
  std::vector<int> bin(static_cast<std::size_t>(max_deg) + 1, 0);
  for (int i = 0; i < n; ++i) ++bin[deg[i]];
  int start = 0;
  for (int d = 0; d <= max_deg; ++d) {
    const int count = bin[d];
    bin[d] = start;
    start += count;
  }
  std::vector<int> order(n), pos(n);
  for (int i = 0; i < n; ++i) {
    pos[i] = bin[deg[i]]++;
    order[pos[i]] = i;
  }
  for (int d = max_deg; d > 0; --d) bin[d] = bin[d - 1];
  bin[0] = 0;

  for (int k = 0; k < n; ++k) {
    const int v = order[k];
    for (int u : und.neighbors(v)) {
      if (deg[u] > deg[v]) {
        const int du = deg[u];
        const int pu = pos[u];
        const int pw = bin[du];
        const int w = order[pw];
        if (u != w) {
          order[pu] = w;
          pos[w] = pu;
          order[pw] = u;
          pos[u] = pw;
        }
        ++bin[du];
        --deg[u];
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    out.core_number[i] = deg[i];
    out.degeneracy = std::max(out.degeneracy, deg[i]);
  }
  return out;
}

InducedSubgraph extract_k_core(const SparseGraph& g, const CoreDecomposition& cores, int k) {
  if (k < 0) throw InvalidArgument("extract_k_core: k must be non-negative");
  InducedSubgraph sub;
  for (int i = 0; i < g.n(); ++i) {
    if (cores.core_number[i] >= k) sub.nodes.push_back(i);
  }
  sub.graph = g.induced(sub.nodes);
  return sub;
}

InducedSubgraph extract_k_core(const SparseGraph& g, int k) {
  return extract_k_core(g, core_decomposition(g), k);
}

PropagationWave propagation_wave(const SparseGraph& g, const std::vector<int>& embedded,
                                 const std::vector<char>& is_embedded) {
  const int n = g.n();
  PropagationWave wave;
  std::vector<int> v1_local(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k < embedded.size(); ++k) v1_local[embedded[k]] = static_cast<int>(k);

  std::vector<char> in_frontier(static_cast<std::size_t>(n), 0);
  for (int i : embedded) {
    for (int j : g.neighbors(i)) {
      if (!is_embedded[j] && !in_frontier[j]) {
        in_frontier[j] = 1;
        wave.frontier.push_back(j);
      }
    }
  }
  std::sort(wave.frontier.begin(), wave.frontier.end());
  std::vector<int> v2_local(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k < wave.frontier.size(); ++k) v2_local[wave.frontier[k]] = static_cast<int>(k);

  using Trip = Eigen::Triplet<double, std::int64_t>;
  std::vector<Trip> t1, t2;
  for (std::size_t r = 0; r < wave.frontier.size(); ++r) {
    const int j = wave.frontier[r];
    auto nb = g.neighbors(j);
    auto w = g.weights(j);
    double total = 0.0;
    for (std::size_t e = 0; e < nb.size(); ++e) {
      if (v1_local[nb[e]] >= 0 || v2_local[nb[e]] >= 0) total += w[e];
    }
    if (total <= 0.0) continue;
    for (std::size_t e = 0; e < nb.size(); ++e) {
      if (v1_local[nb[e]] >= 0) {
        t1.emplace_back(static_cast<std::int64_t>(r), v1_local[nb[e]], w[e] / total);
      } else if (v2_local[nb[e]] >= 0) {
        t2.emplace_back(static_cast<std::int64_t>(r), v2_local[nb[e]], w[e] / total);
      }
    }
  }
  const auto rows = static_cast<std::int64_t>(wave.frontier.size());
  wave.from_embedded.resize(rows, static_cast<std::int64_t>(embedded.size()));
  wave.from_embedded.setFromTriplets(t1.begin(), t1.end());
  wave.within.resize(rows, rows);
  wave.within.setFromTriplets(t2.begin(), t2.end());
  return wave;
}

namespace {

void fill_uniform(Matrix& z, Rng& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = dist(rng);
  }
}

void check_embedded(const SparseGraph& g, const std::vector<int>& embedded, const Matrix& z1,
                    std::vector<char>& flags) {
  if (embedded.empty()) throw InvalidArgument("propagation: embedded node set is empty");
  if (static_cast<Eigen::Index>(embedded.size()) != z1.rows()) {
    throw InvalidArgument("propagation: embedding rows do not match the embedded node count");
  }
  flags.assign(static_cast<std::size_t>(g.n()), 0);
  for (int v : embedded) {
    if (v < 0 || v >= g.n()) throw InvalidArgument("propagation: node id out of range");
    if (flags[v]) throw InvalidArgument("propagation: node " + std::to_string(v) + " listed twice");
    flags[v] = 1;
  }
}

}  // namespace

Matrix propagate_embeddings(const SparseGraph& g_in, const std::vector<int>& embedded, const Matrix& z1, int t,
                            std::uint64_t seed) {
  if (t < 1) throw InvalidArgument("propagation: iteration count t must be at least 1");
  const SparseGraph g = g_in.symmetrized();
  std::vector<char> is_embedded;
  check_embedded(g, embedded, z1, is_embedded);

  Rng rng(seed);
  Matrix z = Matrix::Zero(g.n(), z1.cols());
  for (std::size_t k = 0; k < embedded.size(); ++k) z.row(embedded[k]) = z1.row(static_cast<Eigen::Index>(k));

  std::vector<int> v1 = embedded;
  Matrix z_v1 = z1;
  while (true) {
    PropagationWave wave = propagation_wave(g, v1, is_embedded);
    if (wave.frontier.empty()) break;
    Matrix z2(static_cast<Eigen::Index>(wave.frontier.size()), z1.cols());
    fill_uniform(z2, rng);
    const Matrix anchor = wave.from_embedded * z_v1;
    for (int it = 0; it < t; ++it) {
      Matrix next = anchor + wave.within * z2;
      z2.swap(next);
    }
    for (std::size_t k = 0; k < wave.frontier.size(); ++k) {
      z.row(wave.frontier[k]) = z2.row(static_cast<Eigen::Index>(k));
      is_embedded[wave.frontier[k]] = 1;
    }
    v1 = std::move(wave.frontier);
    z_v1 = std::move(z2);
  }

  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < g.n(); ++i) {
    if (is_embedded[i]) continue;
    for (Eigen::Index c = 0; c < z.cols(); ++c) z(i, c) = dist(rng);
  }
  return z;
}

namespace {

PropagationWave first_wave(const SparseGraph& g, const std::vector<int>& embedded, const Matrix& z1) {
  std::vector<char> flags;
  check_embedded(g, embedded, z1, flags);
  PropagationWave wave = propagation_wave(g, embedded, flags);
  if (wave.frontier.empty()) throw InvalidArgument("propagation: no unembedded node is connected to the embedded set");
  return wave;
}

Matrix dense_fixed_point(const PropagationWave& wave, const Matrix& z1) {
  const Eigen::Index k = static_cast<Eigen::Index>(wave.frontier.size());
  const Eigen::MatrixXd a2 = Eigen::MatrixXd(wave.within);
  const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(k, k) - a2;
  const Eigen::MatrixXd rhs = Eigen::MatrixXd(wave.from_embedded * z1);
  return lhs.partialPivLu().solve(rhs);
}

}  // namespace

Matrix propagation_fixed_point(const SparseGraph& g_in, const std::vector<int>& embedded, const Matrix& z1) {
  const SparseGraph g = g_in.symmetrized();
  return dense_fixed_point(first_wave(g, embedded, z1), z1);
}

std::vector<double> propagation_error_curve(const SparseGraph& g_in, const std::vector<int>& embedded,
                                            const Matrix& z1, int t_max, std::uint64_t seed, const Matrix* z0) {
  if (t_max < 0) throw InvalidArgument("propagation: t_max must be non-negative");
  const SparseGraph g = g_in.symmetrized();
  const PropagationWave wave = first_wave(g, embedded, z1);
  const Matrix star = dense_fixed_point(wave, z1);
  Matrix z2(star.rows(), star.cols());
  if (z0 != nullptr) {
    if (z0->rows() != star.rows() || z0->cols() != star.cols()) {
      throw InvalidArgument("propagation: initial matrix has the wrong shape");
    }
    z2 = *z0;
  } else {
    Rng rng(seed);
    fill_uniform(z2, rng);
  }
  const Matrix anchor = wave.from_embedded * z1;
  std::vector<double> dist;
  dist.reserve(static_cast<std::size_t>(t_max) + 1);
  dist.push_back((z2 - star).norm());
  for (int it = 0; it < t_max; ++it) {
    Matrix next = anchor + wave.within * z2;
    z2.swap(next);
    dist.push_back((z2 - star).norm());
  }
  return dist;
}

}  // namespace gae
