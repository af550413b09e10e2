#include <cmath>

#include "gae/model.hpp"
#include "pair_loss.hpp"

namespace gae {

struct Objective::Forward {
  Matrix h0;  // first-layer pre-activation (gcn only)
  Matrix out;
};

Objective::Objective(const SparseGraph& g, const FeatureMatrix* x, const ModelSpec& spec, std::optional<double> w_pos,
                     std::optional<ModularityReg> modularity)
    : graph_(g), features_(x), spec_(spec), w_pos_(w_pos), modularity_(modularity) {
  if (x != nullptr && x->rows() != g.n()) {
    throw InvalidArgument("features have " + std::to_string(x->rows()) + " rows but the graph has " +
                          std::to_string(g.n()) + " nodes");
  }
  if (w_pos_ && !(*w_pos_ >= 1.0)) throw InvalidArgument("w_pos must be at least 1");
  if (modularity_) {
    if (modularity_->beta < 0.0 || modularity_->gamma < 0.0) {
      throw InvalidArgument("modularity regularizer needs beta >= 0 and gamma >= 0");
    }
    if (modularity_->beta != 0.0 && g.directed()) {
      throw InvalidArgument("modularity regularizer requires an undirected graph");
    }
  }
  ops_ = build_operators(g, spec.op);
  degrees_.resize(static_cast<std::size_t>(g.n()));
  for (int i = 0; i < g.n(); ++i) {
    degrees_[i] = g.weighted_degree(i);
    two_m_ += degrees_[i];
  }
  if (modularity_ && modularity_->beta != 0.0 && !(two_m_ > 0.0)) {
    throw InvalidArgument("modularity regularizer: graph has no edges");
  }
}

Matrix Objective::first_product(const Operator& op, const Matrix& w) const {
  return encode_linear(op, features_, w);
}

Matrix Objective::first_transpose_product(const Operator& op, const Matrix& g) const {
  const Matrix tg = op.matrix.transpose() * g;
  if (features_ == nullptr) return tg;
  return features_->transpose() * tg;
}

Objective::Forward Objective::forward(const LayerWeights& w) const {
  Forward fw;
  if (spec_.encoder == EncoderKind::linear) {
    fw.out = first_product(ops_.inner, w.w0);
  } else {
    fw.h0 = first_product(ops_.inner, w.w0);
    const Matrix hw = fw.h0.cwiseMax(0.0) * w.w1;
    fw.out = ops_.outer.matrix * hw;
  }
  return fw;
}

void Objective::backward(const Forward& fw, const LayerWeights& w, const Matrix& grad_out, LayerWeights& grad) const {
  if (spec_.encoder == EncoderKind::linear) {
    grad.w0 = first_transpose_product(ops_.inner, grad_out);
    grad.w1.resize(0, 0);
    return;
  }
  const Matrix back = ops_.outer.matrix.transpose() * grad_out;
  grad.w1 = fw.h0.cwiseMax(0.0).transpose() * back;
  Matrix dh = back * w.w1.transpose();
  for (Eigen::Index i = 0; i < dh.rows(); ++i) {
    for (Eigen::Index j = 0; j < dh.cols(); ++j) {
      if (!(fw.h0(i, j) > 0.0)) dh(i, j) = 0.0;
    }
  }
  grad.w0 = first_transpose_product(ops_.inner, dh);
}

Matrix Objective::embed(const EncoderWeights& w) const { return forward(w.mean).out; }

double Objective::evaluate(const EncoderWeights& w, const Matrix* noise, std::span<const int> pair_nodes,
                           EncoderWeights* grad) const {
  const Forward fw_mean = forward(w.mean);
  const Matrix& mu = fw_mean.out;
  Forward fw_ls;
  Matrix z;
  if (spec_.variational) {
    if (noise == nullptr || noise->rows() != mu.rows() || noise->cols() != mu.cols()) {
      throw InvalidArgument("variational objective needs an n x output_dim noise matrix");
    }
    fw_ls = forward(w.log_sigma);
    z = mu + (fw_ls.out.array().exp() * noise->array()).matrix();
  } else {
    z = mu;
  }

  const bool all_nodes = pair_nodes.empty();
  SparseGraph sub;
  Matrix z_sub;
  std::vector<double> deg_sub;
  if (!all_nodes) {
    sub = graph_.induced(pair_nodes);
    z_sub.resize(static_cast<Eigen::Index>(pair_nodes.size()), z.cols());
    deg_sub.resize(pair_nodes.size());
    for (std::size_t k = 0; k < pair_nodes.size(); ++k) {
      z_sub.row(static_cast<Eigen::Index>(k)) = z.row(pair_nodes[k]);
      deg_sub[k] = degrees_[pair_nodes[k]];
    }
  }
  const SparseGraph& labels = all_nodes ? graph_ : sub;

  detail::PairLossInput in;
  in.z = all_nodes ? &z : &z_sub;
  in.labels = &labels;
  in.decoder = spec_.decoder;
  in.w_pos = w_pos_ ? *w_pos_ : detail::positive_weight(labels);
  if (modularity_ && modularity_->beta != 0.0) {
    in.modularity = &*modularity_;
    in.degrees = all_nodes ? &degrees_ : &deg_sub;
    in.two_m = two_m_;
  }

  Matrix grad_pairs;
  const detail::PairLossValue terms = detail::pair_losses(in, grad ? &grad_pairs : nullptr);
  double loss = terms.reconstruction + terms.modularity;

  Matrix grad_z;
  if (grad != nullptr) {
    if (all_nodes) {
      grad_z = std::move(grad_pairs);
    } else {
      grad_z = Matrix::Zero(z.rows(), z.cols());
      for (std::size_t k = 0; k < pair_nodes.size(); ++k) {
        grad_z.row(pair_nodes[k]) += grad_pairs.row(static_cast<Eigen::Index>(k));
      }
    }
  }

  if (spec_.variational) {
    const Matrix& ls = fw_ls.out;
    const double node_count = static_cast<double>(labels.n());
    const double kl_weight = 1.0 / node_count;
    loss += kl_weight * kl_gaussian(mu, ls);
    if (grad != nullptr) {
      const double c = kl_weight / static_cast<double>(mu.rows());
      const Matrix sigma = ls.array().exp().matrix();
      Matrix grad_mu = grad_z + c * mu;
      Matrix grad_ls = (grad_z.array() * noise->array() * sigma.array()).matrix();
      grad_ls.array() += c * (sigma.array().square() - 1.0);
      backward(fw_mean, w.mean, grad_mu, grad->mean);
      backward(fw_ls, w.log_sigma, grad_ls, grad->log_sigma);
    }
  } else if (grad != nullptr) {
    backward(fw_mean, w.mean, grad_z, grad->mean);
  }

  if (!std::isfinite(loss)) throw NumericError("training loss is not finite");
  return loss;
}

}  // namespace gae
