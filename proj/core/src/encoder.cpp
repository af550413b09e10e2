#include <cmath>

#include "gae/model.hpp"

namespace gae {

EncoderKind parse_encoder_kind(const std::string& name) {
  if (name == "linear") return EncoderKind::linear;
  if (name == "gcn" || name == "gcn2") return EncoderKind::gcn2;
  throw InvalidArgument("unknown encoder '" + name + "' (expected linear or gcn)");
}

DecoderKind parse_decoder_kind(const std::string& name) {
  if (name == "inner_product") return DecoderKind::inner_product;
  if (name == "source_target") return DecoderKind::source_target;
  if (name == "gravity") return DecoderKind::gravity;
  throw InvalidArgument("unknown decoder '" + name + "' (expected inner_product, source_target or gravity)");
}

OperatorKind parse_operator_kind(const std::string& name) {
  if (name == "symmetric") return OperatorKind::symmetric;
  if (name == "out_degree") return OperatorKind::out_degree;
  throw InvalidArgument("unknown operator '" + name + "' (expected symmetric or out_degree)");
}

std::string to_string(EncoderKind kind) { return kind == EncoderKind::linear ? "linear" : "gcn"; }

std::string to_string(DecoderKind kind) {
  switch (kind) {
    case DecoderKind::inner_product: return "inner_product";
    case DecoderKind::source_target: return "source_target";
    case DecoderKind::gravity: return "gravity";
  }
  return "unknown";
}

std::string to_string(OperatorKind kind) { return kind == OperatorKind::symmetric ? "symmetric" : "out_degree"; }

EncoderOperators build_operators(const SparseGraph& g, const OperatorSpec& spec) {
  EncoderOperators ops;
  ops.outer = normalize(g, spec.kind);
  if (spec.lambda_enc == 0.0) {
    ops.inner = ops.outer;
  } else {
    if (spec.prior.n() != g.n()) {
      throw InvalidArgument("operator: prior graph has " + std::to_string(spec.prior.n()) + " nodes, graph has " +
                            std::to_string(g.n()));
    }
    ops.inner = normalize_mixed(g, spec.prior, spec.lambda_enc, spec.kind);
  }
  return ops;
}

namespace {

Matrix first_layer(const Operator& op, const FeatureMatrix* x, const Matrix& w) {
  if (x == nullptr) {
    if (w.rows() != op.n()) {
      throw InvalidArgument("encoder: featureless weight matrix needs " + std::to_string(op.n()) + " rows, has " +
                            std::to_string(w.rows()));
    }
    return op.matrix * w;
  }
  if (x->rows() != op.n()) throw InvalidArgument("encoder: feature rows do not match the node count");
  if (x->cols() != w.rows()) {
    throw InvalidArgument("encoder: feature dimension " + std::to_string(x->cols()) + " does not match weight rows " +
                          std::to_string(w.rows()));
  }
  const Matrix xw = (*x) * w;
  return op.matrix * xw;
}

}  // namespace

Matrix encode_linear(const Operator& op, const FeatureMatrix* x, const Matrix& w) { return first_layer(op, x, w); }

Matrix encode_gcn2(const Operator& outer, const Operator& inner, const FeatureMatrix* x, const Matrix& w0,
                   const Matrix& w1) {
  if (outer.n() != inner.n()) throw InvalidArgument("encoder: operators have different sizes");
  if (w0.cols() != w1.rows()) throw InvalidArgument("encoder: hidden dimensions of W0 and W1 differ");
  const Matrix h = first_layer(inner, x, w0).cwiseMax(0.0);
  const Matrix hw = h * w1;
  return outer.matrix * hw;
}

Matrix standard_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix eps(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) eps(i, j) = dist(rng);
  }
  return eps;
}

Matrix reparameterize(const Matrix& mu, const Matrix& log_sigma, std::uint64_t seed) {
  if (mu.rows() != log_sigma.rows() || mu.cols() != log_sigma.cols()) {
    throw InvalidArgument("reparameterize: mu and log_sigma shapes differ");
  }
  Rng rng(seed);
  const Matrix eps = standard_normal(mu.rows(), mu.cols(), rng);
  return mu + (log_sigma.array().exp() * eps.array()).matrix();
}

EncoderWeights init_weights(const ModelSpec& spec, int input_dim, Rng& rng) {
  if (spec.embedding_dim < 1) throw InvalidArgument("model: embedding dimension must be positive");
  if (spec.encoder == EncoderKind::gcn2 && spec.hidden_dim < 1) {
    throw InvalidArgument("model: hidden dimension must be positive");
  }
  if (spec.decoder.kind == DecoderKind::source_target && spec.embedding_dim % 2 != 0) {
    throw InvalidArgument("source_target decoder needs an even embedding dimension, got " +
                          std::to_string(spec.embedding_dim));
  }
  const int out = spec.output_dim();
  auto stack = [&](LayerWeights& lw) {
    if (spec.encoder == EncoderKind::linear) {
      lw.w0 = glorot_uniform(input_dim, out, rng);
      lw.w1.resize(0, 0);
    } else {
      lw.w0 = glorot_uniform(input_dim, spec.hidden_dim, rng);
      lw.w1 = glorot_uniform(spec.hidden_dim, out, rng);
    }
  };
  EncoderWeights w;
  stack(w.mean);
  if (spec.variational) stack(w.log_sigma);
  return w;
}

}  // namespace gae
