#include <algorithm>

#include "gae/model.hpp"

namespace gae {

Matrix infer_new_nodes(const TrainedModel& model, const SparseGraph& g_augmented, const FeatureMatrix& x_augmented,
                       std::span<const int> new_nodes) {
  if (model.featureless) {
    throw InvalidArgument(
        "model was trained without node features: its first-layer weights are tied to the training nodes, so the "
        "encoder is transductive and cannot embed new nodes");
  }
  if (x_augmented.rows() != g_augmented.n()) {
    throw InvalidArgument("augmented features have " + std::to_string(x_augmented.rows()) + " rows, graph has " +
                          std::to_string(g_augmented.n()) + " nodes");
  }
  if (g_augmented.n() < model.num_nodes) {
    throw InvalidArgument("augmented graph must extend the training graph");
  }
  const LayerWeights& w = model.weights.mean;
  if (x_augmented.cols() != w.w0.rows()) {
    throw InvalidArgument("augmented features have " + std::to_string(x_augmented.cols()) +
                          " columns, model expects " + std::to_string(w.w0.rows()));
  }
  for (int v : new_nodes) {
    if (v < 0 || v >= g_augmented.n()) throw InvalidArgument("new node id out of range");
  }

  OperatorSpec op = model.spec.op;
  if (op.lambda_enc != 0.0 && op.prior.n() < g_augmented.n()) {
    op.prior = op.prior.with_extra_nodes(g_augmented.n() - op.prior.n());
  }
  const EncoderOperators ops = build_operators(g_augmented, op);
  const Matrix z = model.spec.encoder == EncoderKind::linear
                       ? encode_linear(ops.inner, &x_augmented, w.w0)
                       : encode_gcn2(ops.outer, ops.inner, &x_augmented, w.w0, w.w1);
  Matrix out(static_cast<Eigen::Index>(new_nodes.size()), z.cols());
  for (std::size_t k = 0; k < new_nodes.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = z.row(new_nodes[k]);
  return out;
}

std::vector<std::vector<RankedCandidate>> rank_neighbors(const Matrix& z, const DecoderConfig& decoder,
                                                         std::span<const int> queries, int k) {
  validate_decoder_input(z, decoder);
  const auto n = static_cast<int>(z.rows());
  if (k < 1 || k > n - 1) {
    throw InvalidArgument("rank: k must lie in [1, " + std::to_string(n - 1) + "], got " + std::to_string(k));
  }
  std::vector<std::vector<RankedCandidate>> out;
  out.reserve(queries.size());
  std::vector<RankedCandidate> cand;
  for (int q : queries) {
    if (q < 0 || q >= n) throw InvalidArgument("rank: query node out of range");
    cand.clear();
    for (int j = 0; j < n; ++j) {
      if (j != q) cand.push_back({j, sigmoid(decode_logit(z, q, j, decoder))});
    }
    auto better = [](const RankedCandidate& a, const RankedCandidate& b) {
      return a.score > b.score || (a.score == b.score && a.node < b.node);
    };
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end(), better);
    out.emplace_back(cand.begin(), cand.begin() + k);
  }
  return out;
}

std::vector<std::vector<RankedCandidate>> rank_neighbors(const TrainedModel& model, std::span<const int> queries,
                                                         int k) {
  return rank_neighbors(model.embedding, model.spec.decoder, queries, k);
}

}  // namespace gae
