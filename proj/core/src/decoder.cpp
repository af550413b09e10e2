#include <algorithm>
#include <cmath>

#include "gae/model.hpp"

namespace gae {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void validate_decoder_input(const Matrix& z, const DecoderConfig& cfg) {
  switch (cfg.kind) {
    case DecoderKind::inner_product:
      break;
    case DecoderKind::source_target:
      if (z.cols() % 2 != 0) {
        throw InvalidArgument("source_target decoder needs an even embedding dimension, got " +
                              std::to_string(z.cols()));
      }
      break;
    case DecoderKind::gravity:
      if (z.cols() < 2) throw InvalidArgument("gravity decoder needs embedding columns plus a mass column");
      if (!(cfg.dist_floor > 0.0)) throw InvalidArgument("gravity decoder needs a positive distance floor");
      if (cfg.lambda_grav < 0.0) throw InvalidArgument("gravity decoder needs lambda >= 0");
      break;
  }
}

double decode_logit(const Matrix& z, int i, int j, const DecoderConfig& cfg) {
  const Eigen::Index d = z.cols();
  switch (cfg.kind) {
    case DecoderKind::inner_product: {
      double s = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) s += z(i, k) * z(j, k);
      return s;
    }
    case DecoderKind::source_target: {
      const Eigen::Index half = d / 2;
      double s = 0.0;
      for (Eigen::Index k = 0; k < half; ++k) s += z(i, k) * z(j, half + k);
      return s;
    }
    case DecoderKind::gravity: {
      const Eigen::Index dims = d - 1;
      double dist = 0.0;
      for (Eigen::Index k = 0; k < dims; ++k) {
        const double diff = z(i, k) - z(j, k);
        dist += diff * diff;
      }
      return z(j, dims) - cfg.lambda_grav * std::log(std::max(dist, cfg.dist_floor));
    }
  }
  return 0.0;
}

std::vector<double> decode_logits(const Matrix& z, std::span<const NodePair> pairs, const DecoderConfig& cfg) {
  validate_decoder_input(z, cfg);
  std::vector<double> out;
  out.reserve(pairs.size());
  const auto n = static_cast<int>(z.rows());
  for (const auto& [i, j] : pairs) {
    if (i < 0 || j < 0 || i >= n || j >= n) throw InvalidArgument("decode: node index out of range");
    out.push_back(decode_logit(z, i, j, cfg));
  }
  return out;
}

std::vector<double> decode(const Matrix& z, std::span<const NodePair> pairs, const DecoderConfig& cfg) {
  std::vector<double> out = decode_logits(z, pairs, cfg);
  for (double& v : out) v = sigmoid(v);
  return out;
}

Matrix dense_logits(const Matrix& z, const DecoderConfig& cfg) {
  validate_decoder_input(z, cfg);
  const auto n = static_cast<int>(z.rows());
  Matrix out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = decode_logit(z, i, j, cfg);
  }
  return out;
}

}  // namespace gae
