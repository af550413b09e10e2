#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gae/common.hpp"
#include "gae/graph.hpp"
#include "gae/operator.hpp"
#include "gae/sampling.hpp"

namespace gae {

enum class EncoderKind { linear, gcn2 };
enum class DecoderKind { inner_product, source_target, gravity };

EncoderKind parse_encoder_kind(const std::string& name);
DecoderKind parse_decoder_kind(const std::string& name);
OperatorKind parse_operator_kind(const std::string& name);
std::string to_string(EncoderKind kind);
std::string to_string(DecoderKind kind);
std::string to_string(OperatorKind kind);

struct DecoderConfig {
  DecoderKind kind = DecoderKind::inner_product;
  double lambda_grav = 1.0;
  double dist_floor = 1e-16;
};

/// Weights of one encoder stack. Linear encoders use w0 only.
struct LayerWeights {
  Matrix w0;
  Matrix w1;
};

struct EncoderWeights {
  LayerWeights mean;        // Z, or mu when variational
  LayerWeights log_sigma;   // variational only
};

/// First-layer operator uses A + lambda_enc * prior; the second layer uses A.
struct OperatorSpec {
  OperatorKind kind = OperatorKind::symmetric;
  double lambda_enc = 0.0;
  SparseGraph prior;  // A_s; may be empty (0 nodes) when lambda_enc == 0
};

struct ModelSpec {
  EncoderKind encoder = EncoderKind::gcn2;
  bool variational = false;
  int hidden_dim = 32;
  int embedding_dim = 16;
  DecoderConfig decoder;
  OperatorSpec op;

  /// Encoder output width: embedding_dim, plus one mass column for gravity.
  int output_dim() const { return embedding_dim + (decoder.kind == DecoderKind::gravity ? 1 : 0); }
};

struct EncoderOperators {
  Operator outer;
  Operator inner;
};

EncoderOperators build_operators(const SparseGraph& g, const OperatorSpec& spec);

// ---- encoders ---------------------------------------------------------------

/// op * X * W; a null X stands for the identity (featureless nodes).
Matrix encode_linear(const Operator& op, const FeatureMatrix* x, const Matrix& w);

/// outer * ReLU(inner * X * W0) * W1.
Matrix encode_gcn2(const Operator& outer, const Operator& inner, const FeatureMatrix* x, const Matrix& w0,
                   const Matrix& w1);

/// mu + exp(log_sigma) * eps with eps ~ N(0, 1) drawn from `seed`.
Matrix reparameterize(const Matrix& mu, const Matrix& log_sigma, std::uint64_t seed);

/// Standard-normal matrix used as reparameterization noise.
Matrix standard_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng);

// ---- decoders ---------------------------------------------------------------

using NodePair = std::pair<int, int>;

double decode_logit(const Matrix& z, int i, int j, const DecoderConfig& cfg);
std::vector<double> decode_logits(const Matrix& z, std::span<const NodePair> pairs, const DecoderConfig& cfg);
std::vector<double> decode(const Matrix& z, std::span<const NodePair> pairs, const DecoderConfig& cfg);

/// All n x n logits (small graphs and tests).
Matrix dense_logits(const Matrix& z, const DecoderConfig& cfg);

void validate_decoder_input(const Matrix& z, const DecoderConfig& cfg);

double sigmoid(double x);

// ---- losses -----------------------------------------------------------------

/// Mean over all entries of -[w_pos A log s(x) + (1 - A) log(1 - s(x))], in logit space.
double loss_reconstruction(const Matrix& logits, const Matrix& labels, double w_pos);

/// -1/2 sum(1 + 2 log_sigma - mu^2 - sigma^2) / n.
double kl_gaussian(const Matrix& mu, const Matrix& log_sigma);

/// -(beta / 2m) sum_ij [A_ij - d_i d_j / 2m] exp(-gamma ||z_i - z_j||^2).
double loss_modularity_reg(const Matrix& z, const SparseGraph& g, double beta, double gamma);

/// (#pairs - #positive) / #positive for labels A + I on an n-node graph, at least 1.
double default_positive_weight(const SparseGraph& g);

// ---- training ---------------------------------------------------------------

struct ModularityReg {
  double beta = 0.0;
  double gamma = 0.0;
};

enum class ScalingKind { full, kcore, fastgae };
ScalingKind parse_scaling_kind(const std::string& name);
std::string to_string(ScalingKind kind);

struct ScalingConfig {
  ScalingKind kind = ScalingKind::full;
  int core_k = 2;
  int propagation_t = 10;
  SamplingConfig sampling;  // size 0 selects the recommended size
  ThresholdParams threshold;
};

struct TrainConfig {
  int epochs = 200;
  double learning_rate = 0.01;
  std::optional<double> w_pos;  // empty: computed from the reconstructed pair set
  ScalingConfig scaling;
  std::optional<ModularityReg> modularity;
  std::uint64_t seed = 0;
  double pair_budget = 1.0e9;  // max pairs a single loss evaluation may touch
};

/// Loss and gradient of one training objective on a fixed graph.
/// Total = reconstruction mean over the pair set
///       + modularity regularizer over the pair set (when enabled)
///       + kl_gaussian over all nodes / |pair nodes| (variational).
class Objective {
 public:
  Objective(const SparseGraph& g, const FeatureMatrix* x, const ModelSpec& spec,
            std::optional<double> w_pos = std::nullopt, std::optional<ModularityReg> modularity = std::nullopt);

  /// `noise` must be n x output_dim when variational. `pair_nodes` empty means
  /// every node. Writes dLoss/dWeights to `grad` when non-null.
  double evaluate(const EncoderWeights& w, const Matrix* noise, std::span<const int> pair_nodes,
                  EncoderWeights* grad) const;

  /// Encoder means (Z for a GAE, mu for a VGAE).
  Matrix embed(const EncoderWeights& w) const;

  int n() const { return graph_.n(); }
  const SparseGraph& graph() const { return graph_; }
  const ModelSpec& spec() const { return spec_; }

 private:
  struct Forward;

  Matrix first_product(const Operator& op, const Matrix& w) const;
  Matrix first_transpose_product(const Operator& op, const Matrix& g) const;
  Forward forward(const LayerWeights& w) const;
  void backward(const Forward& fw, const LayerWeights& w, const Matrix& grad_out, LayerWeights& grad) const;

  SparseGraph graph_;
  const FeatureMatrix* features_;
  ModelSpec spec_;
  std::optional<double> w_pos_;
  std::optional<ModularityReg> modularity_;
  EncoderOperators ops_;
  std::vector<double> degrees_;
  double two_m_ = 0.0;
};

/// Glorot-initialized encoder weights for a graph with n nodes and f features
/// (f = n for featureless input).
EncoderWeights init_weights(const ModelSpec& spec, int input_dim, Rng& rng);

struct TrainedModel {
  ModelSpec spec;
  TrainConfig config;
  EncoderWeights weights;
  bool featureless = true;
  int num_nodes = 0;
  Matrix embedding;  // n x output_dim; means for a VGAE, propagated rows for kcore scaling
  std::vector<double> loss_trace;
};

/// Gradient-based training with Adam (0.9, 0.999, 1e-8) and manual gradients.
TrainedModel train(const SparseGraph& g, const FeatureMatrix* x, const ModelSpec& spec, const TrainConfig& config);

/// Embeddings (and masses) of `new_nodes` after one forward pass on the augmented graph.
Matrix infer_new_nodes(const TrainedModel& model, const SparseGraph& g_augmented, const FeatureMatrix& x_augmented,
                       std::span<const int> new_nodes);

struct RankedCandidate {
  int node = 0;
  double score = 0.0;
};

/// Top-k decoded candidates per query (query excluded), descending score,
/// ties by ascending node id.
std::vector<std::vector<RankedCandidate>> rank_neighbors(const Matrix& z, const DecoderConfig& decoder,
                                                         std::span<const int> queries, int k);
std::vector<std::vector<RankedCandidate>> rank_neighbors(const TrainedModel& model, std::span<const int> queries,
                                                         int k);

// ---- checkpoints -------------------------------------------------------------

constexpr int kCheckpointVersion = 1;
void save_checkpoint(std::ostream& out, const TrainedModel& model);
TrainedModel load_checkpoint(std::istream& in);

}  // namespace gae
