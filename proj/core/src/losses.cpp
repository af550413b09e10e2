#include <algorithm>
#include <cmath>

#include "gae/model.hpp"
#include "pair_loss.hpp"

namespace gae {
namespace {

constexpr Eigen::Index kBlockEntries = Eigen::Index{1} << 21;

/// softplus(x) = log(1 + e^x) and sigmoid(x), sharing one exponential.
struct LogisticTerms {
  double softplus;
  double sigmoid;
};

inline LogisticTerms logistic(double x) {
  const double e = std::exp(-std::abs(x));
  const double sp = std::max(x, 0.0) + std::log1p(e);
  const double sg = x >= 0.0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
  return {sp, sg};
}

/// Cross-entropy of one pair: w a softplus(-x) + (1 - a) softplus(x), and its x-derivative.
inline void pair_term(double x, double a, double w_pos, double& loss, double& grad) {
  const LogisticTerms t = logistic(x);
  // softplus(-x) = softplus(x) - x and sigmoid(-x) = 1 - sigmoid(x)
  loss = w_pos * a * (t.softplus - x) + (1.0 - a) * t.softplus;
  grad = -w_pos * a * (1.0 - t.sigmoid) + (1.0 - a) * t.sigmoid;
}

/// Accumulates the gradient of sum_ij K_ij ||c_i - c_j||^2 for rows [r0, r0 + K.rows()).
void accumulate_distance_grad(const Matrix& k, Eigen::Index r0, const Matrix& coords,
                              Eigen::Block<Matrix> grad_coords) {
  const Eigen::Index rb = k.rows();
  const Vector rs = k.rowwise().sum();
  const Vector cs = k.colwise().sum().transpose();
  const auto rows = coords.middleRows(r0, rb);
  grad_coords.middleRows(r0, rb) += 2.0 * (rs.asDiagonal() * rows - k * coords);
  grad_coords += 2.0 * (cs.asDiagonal() * coords - k.transpose() * rows);
}

/// Squared distances between rows [r0, r0 + rb) and all rows, diagonal forced to 0.
Matrix block_sq_distances(const Matrix& coords, const Vector& sqn, Eigen::Index r0, Eigen::Index rb) {
  Matrix dist = -2.0 * (coords.middleRows(r0, rb) * coords.transpose());
  for (Eigen::Index a = 0; a < rb; ++a) {
    double* row = dist.row(a).data();
    const double si = sqn(r0 + a);
    for (Eigen::Index b = 0; b < dist.cols(); ++b) row[b] = std::max(row[b] + si + sqn(b), 0.0);
    row[r0 + a] = 0.0;
  }
  return dist;
}

}  // namespace

namespace detail {

double positive_weight(const SparseGraph& labels) {
  const double n = labels.n();
  double positive = n;  // diagonal
  for (double w : labels.values()) positive += w;
  const double pairs = n * n;
  if (positive <= 0.0) return 1.0;
  return std::max(1.0, (pairs - positive) / positive);
}

PairLossValue pair_losses(const PairLossInput& in, Matrix* grad) {
  const Matrix& z = *in.z;
  const SparseGraph& labels = *in.labels;
  const Eigen::Index ns = z.rows();
  const Eigen::Index d = z.cols();
  if (labels.n() != ns) throw InvalidArgument("pair loss: label graph and embedding rows differ");
  validate_decoder_input(z, in.decoder);

  PairLossValue out;
  if (grad != nullptr) grad->setZero(ns, d);
  if (ns == 0) return out;

  const double inv_pairs = 1.0 / (static_cast<double>(ns) * static_cast<double>(ns));
  const Eigen::Index block = std::clamp<Eigen::Index>(kBlockEntries / ns, 1, ns);
  const DecoderKind kind = in.decoder.kind;
  const double lambda = in.decoder.lambda_grav;
  const double floor = in.decoder.dist_floor;

  const Eigen::Index half = d / 2;
  const Eigen::Index dims = kind == DecoderKind::gravity ? d - 1 : d;
  Matrix coords;
  Vector sqn;
  Matrix src, tgt;
  if (kind == DecoderKind::gravity) {
    coords = z.leftCols(dims);
    sqn = coords.rowwise().squaredNorm();
  } else if (kind == DecoderKind::source_target) {
    src = z.leftCols(half);
    tgt = z.rightCols(half);
  }

  const bool use_mod = in.modularity != nullptr && in.modularity->beta != 0.0;
  Matrix mod_coords;
  Vector mod_sqn;
  if (use_mod) {
    if (in.degrees == nullptr || static_cast<Eigen::Index>(in.degrees->size()) != ns || !(in.two_m > 0.0)) {
      throw InvalidArgument("modularity regularizer needs degrees and a graph with at least one edge");
    }
    mod_coords = kind == DecoderKind::gravity ? coords : z;
    mod_sqn = mod_coords.rowwise().squaredNorm();
  }

  double recon_sum = 0.0;
  double mod_sum = 0.0;
  for (Eigen::Index r0 = 0; r0 < ns; r0 += block) {
    const Eigen::Index rb = std::min(block, ns - r0);

    Matrix logits;
    Matrix dist;
    if (kind == DecoderKind::inner_product) {
      logits = z.middleRows(r0, rb) * z.transpose();
    } else if (kind == DecoderKind::source_target) {
      logits = src.middleRows(r0, rb) * tgt.transpose();
    } else {
      dist = block_sq_distances(coords, sqn, r0, rb);
      logits.resize(rb, ns);
      for (Eigen::Index a = 0; a < rb; ++a) {
        for (Eigen::Index b = 0; b < ns; ++b) {
          logits(a, b) = z(b, dims) - lambda * std::log(std::max(dist(a, b), floor));
        }
      }
    }

    Matrix g(rb, ns);
    for (Eigen::Index a = 0; a < rb; ++a) {
      const int i = static_cast<int>(r0 + a);
      double* lrow = logits.row(a).data();
      double* grow = g.row(a).data();
      double row_loss = 0.0;
      for (Eigen::Index b = 0; b < ns; ++b) {
        const double x = lrow[b];
        if (!std::isfinite(x)) throw NumericError("reconstruction loss: non-finite logit");
        const LogisticTerms t = logistic(x);
        row_loss += t.softplus;
        grow[b] = t.sigmoid;
      }
      // replace the label-0 terms by the labelled ones
      auto fix = [&](Eigen::Index b, double label) {
        const double x = lrow[b];
        const LogisticTerms t = logistic(x);
        double l = 0.0, gr = 0.0;
        pair_term(x, label, in.w_pos, l, gr);
        row_loss += l - t.softplus;
        grow[b] = gr;
      };
      fix(i, 1.0);
      auto nb = labels.neighbors(i);
      auto w = labels.weights(i);
      for (std::size_t e = 0; e < nb.size(); ++e) fix(nb[e], w[e]);
      recon_sum += row_loss;
    }

    if (grad != nullptr) {
      g *= inv_pairs;
      if (kind == DecoderKind::inner_product) {
        grad->middleRows(r0, rb) += g * z;
        grad->noalias() += g.transpose() * z.middleRows(r0, rb);
      } else if (kind == DecoderKind::source_target) {
        grad->block(r0, 0, rb, half) += g * tgt;
        grad->rightCols(half) += g.transpose() * src.middleRows(r0, rb);
      } else {
        grad->col(dims) += g.colwise().sum().transpose();
        Matrix k(rb, ns);
        for (Eigen::Index a = 0; a < rb; ++a) {
          for (Eigen::Index b = 0; b < ns; ++b) {
            const double dd = dist(a, b);
            k(a, b) = dd > floor ? -lambda * g(a, b) / dd : 0.0;
          }
        }
        accumulate_distance_grad(k, r0, coords, grad->leftCols(dims));
      }
    }

    if (use_mod) {
      const double beta = in.modularity->beta;
      const double gamma = in.modularity->gamma;
      const std::vector<double>& deg = *in.degrees;
      const double c = beta / in.two_m;
      Matrix e = block_sq_distances(mod_coords, mod_sqn, r0, rb);
      e = (-gamma * e.array()).exp().matrix();
      Matrix k;
      if (grad != nullptr) k.resize(rb, ns);
      for (Eigen::Index a = 0; a < rb; ++a) {
        const int i = static_cast<int>(r0 + a);
        const double di = deg[i];
        double sb = 0.0;
        for (Eigen::Index b = 0; b < ns; ++b) sb += deg[b] * e(a, b);
        double sa = 0.0;
        auto nb = labels.neighbors(i);
        auto w = labels.weights(i);
        for (std::size_t q = 0; q < nb.size(); ++q) sa += w[q] * e(a, nb[q]);
        mod_sum += sa - di * sb / in.two_m;
        if (grad != nullptr) {
          const double scale = -c * gamma * di / in.two_m;
          for (Eigen::Index b = 0; b < ns; ++b) k(a, b) = scale * deg[b] * e(a, b);
          for (std::size_t q = 0; q < nb.size(); ++q) k(a, nb[q]) += c * gamma * w[q] * e(a, nb[q]);
          k(a, i) = 0.0;
        }
      }
      if (grad != nullptr) {
        if (kind == DecoderKind::gravity) {
          accumulate_distance_grad(k, r0, mod_coords, grad->leftCols(dims));
        } else {
          accumulate_distance_grad(k, r0, mod_coords, grad->leftCols(d));
        }
      }
    }
  }

  out.reconstruction = recon_sum * inv_pairs;
  if (use_mod) out.modularity = -(in.modularity->beta / in.two_m) * mod_sum;
  return out;
}

}  // namespace detail

double loss_reconstruction(const Matrix& logits, const Matrix& labels, double w_pos) {
  if (logits.rows() != labels.rows() || logits.cols() != labels.cols()) {
    throw InvalidArgument("reconstruction loss: logits and labels have different shapes");
  }
  if (logits.size() == 0) throw InvalidArgument("reconstruction loss: empty pair set");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
      const double x = logits(i, j);
      if (!std::isfinite(x)) throw NumericError("reconstruction loss: non-finite logit");
      double l = 0.0, g = 0.0;
      pair_term(x, labels(i, j), w_pos, l, g);
      sum += l;
    }
  }
  return sum / static_cast<double>(logits.size());
}

double kl_gaussian(const Matrix& mu, const Matrix& log_sigma) {
  if (mu.rows() != log_sigma.rows() || mu.cols() != log_sigma.cols()) {
    throw InvalidArgument("kl_gaussian: mu and log_sigma shapes differ");
  }
  if (mu.rows() == 0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < mu.rows(); ++i) {
    for (Eigen::Index j = 0; j < mu.cols(); ++j) {
      const double ls = log_sigma(i, j);
      const double m = mu(i, j);
      sum += 1.0 + 2.0 * ls - m * m - std::exp(2.0 * ls);
    }
  }
  return -0.5 * sum / static_cast<double>(mu.rows());
}

double loss_modularity_reg(const Matrix& z, const SparseGraph& g, double beta, double gamma) {
  if (g.m() == 0) throw InvalidArgument("modularity regularizer: graph has no edges");
  if (z.rows() != g.n()) throw InvalidArgument("modularity regularizer: embedding rows do not match the graph");
  if (beta == 0.0) return 0.0;
  std::vector<double> deg(static_cast<std::size_t>(g.n()));
  double two_m = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    deg[i] = g.weighted_degree(i);
    two_m += deg[i];
  }
  if (!(two_m > 0.0)) throw InvalidArgument("modularity regularizer: total edge weight is zero");
  const ModularityReg reg{beta, gamma};
  detail::PairLossInput in;
  in.z = &z;
  in.labels = &g;
  in.modularity = &reg;
  in.degrees = &deg;
  in.two_m = two_m;
  // reconstruction part is computed alongside but discarded
  return detail::pair_losses(in, nullptr).modularity;
}

double default_positive_weight(const SparseGraph& g) { return detail::positive_weight(g); }

}  // namespace gae
