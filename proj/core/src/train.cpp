#include <cmath>
#include <functional>
#include <memory>

#include "gae/degeneracy.hpp"
#include "gae/model.hpp"

namespace gae {

ScalingKind parse_scaling_kind(const std::string& name) {
  if (name == "full") return ScalingKind::full;
  if (name == "kcore") return ScalingKind::kcore;
  if (name == "fastgae") return ScalingKind::fastgae;
  throw InvalidArgument("unknown scaling '" + name + "' (expected full, kcore or fastgae)");
}

std::string to_string(ScalingKind kind) {
  switch (kind) {
    case ScalingKind::full: return "full";
    case ScalingKind::kcore: return "kcore";
    case ScalingKind::fastgae: return "fastgae";
  }
  return "unknown";
}

namespace {

class Adam {
 public:
  explicit Adam(double lr) : lr_(lr) {}

  void step(std::vector<Matrix*> params, std::vector<const Matrix*> grads) {
    if (m_.empty()) {
      for (const Matrix* p : params) {
        m_.push_back(Matrix::Zero(p->rows(), p->cols()));
        v_.push_back(Matrix::Zero(p->rows(), p->cols()));
      }
    }
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, t_);
    const double c2 = 1.0 - std::pow(kBeta2, t_);
    for (std::size_t k = 0; k < params.size(); ++k) {
      Matrix& p = *params[k];
      const Matrix& g = *grads[k];
      m_[k] = kBeta1 * m_[k] + (1.0 - kBeta1) * g;
      v_[k] = kBeta2 * v_[k] + (1.0 - kBeta2) * g.cwiseProduct(g);
      p.array() -= lr_ * (m_[k].array() / c1) / ((v_[k].array() / c2).sqrt() + kEps);
    }
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;
  double lr_;
  int t_ = 0;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
};

void collect(EncoderWeights& w, EncoderWeights& g, bool variational, std::vector<Matrix*>& params,
             std::vector<const Matrix*>& grads) {
  auto add = [&](LayerWeights& lw, LayerWeights& lg) {
    params.push_back(&lw.w0);
    grads.push_back(&lg.w0);
    if (lw.w1.size() > 0) {
      params.push_back(&lw.w1);
      grads.push_back(&lg.w1);
    }
  };
  add(w.mean, g.mean);
  if (variational) add(w.log_sigma, g.log_sigma);
}

void check_budget(double nodes, const TrainConfig& cfg, const std::string& what) {
  const double pairs = nodes * nodes;
  if (pairs > cfg.pair_budget) {
    throw InvalidArgument(what + " needs " + format_double(pairs) + " node pairs per epoch, above the pair budget of " +
                          format_double(cfg.pair_budget) + "; use kcore or fastgae scaling or raise pair_budget");
  }
}

using PairSampler = std::function<std::vector<int>(Rng&)>;

std::vector<double> run_epochs(const Objective& obj, EncoderWeights& w, const TrainConfig& cfg, Rng& rng,
                               const PairSampler& sampler) {
  const ModelSpec& spec = obj.spec();
  Adam adam(cfg.learning_rate);
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(cfg.epochs));
  EncoderWeights grad;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<int> nodes;
    if (sampler) nodes = sampler(rng);
    Matrix noise;
    if (spec.variational) noise = standard_normal(obj.n(), spec.output_dim(), rng);
    const double loss = obj.evaluate(w, spec.variational ? &noise : nullptr, nodes, &grad);
    trace.push_back(loss);
    std::vector<Matrix*> params;
    std::vector<const Matrix*> grads;
    collect(w, grad, spec.variational, params, grads);
    for (const Matrix* g : grads) {
      if (!g->allFinite()) throw NumericError("non-finite gradient at epoch " + std::to_string(epoch));
    }
    adam.step(params, grads);
  }
  return trace;
}

void validate(const ModelSpec& spec, const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw InvalidArgument("epochs must be at least 1");
  if (!(cfg.learning_rate > 0.0)) throw InvalidArgument("learning rate must be positive");
  if (cfg.w_pos && !(*cfg.w_pos >= 1.0)) throw InvalidArgument("w_pos must be at least 1");
  if (spec.decoder.kind == DecoderKind::source_target && spec.embedding_dim % 2 != 0) {
    throw InvalidArgument("source_target decoder needs an even embedding dimension, got " +
                          std::to_string(spec.embedding_dim));
  }
}

FeatureMatrix select_rows(const FeatureMatrix& x, const std::vector<int>& rows) {
  FeatureMatrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = x.row(rows[k]);
  return out;
}

}  // namespace

TrainedModel train(const SparseGraph& g, const FeatureMatrix* x, const ModelSpec& spec, const TrainConfig& cfg) {
  validate(spec, cfg);
  TrainedModel model;
  model.spec = spec;
  model.config = cfg;
  model.featureless = x == nullptr;
  model.num_nodes = g.n();

  Rng rng(cfg.seed);
  const ScalingKind scaling = cfg.scaling.kind;

  if (scaling == ScalingKind::kcore) {
    if (cfg.scaling.propagation_t < 1) throw InvalidArgument("propagation_t must be at least 1");
    const InducedSubgraph core = extract_k_core(g, cfg.scaling.core_k);
    if (core.nodes.empty()) {
      throw InvalidArgument("the " + std::to_string(cfg.scaling.core_k) + "-core is empty");
    }
    check_budget(static_cast<double>(core.nodes.size()), cfg, "training on the k-core");
    ModelSpec sub_spec = spec;
    if (spec.op.lambda_enc != 0.0) sub_spec.op.prior = spec.op.prior.induced(core.nodes);
    FeatureMatrix x_core;
    if (x != nullptr) x_core = select_rows(*x, core.nodes);
    const Objective obj(core.graph, x ? &x_core : nullptr, sub_spec, cfg.w_pos, cfg.modularity);
    model.weights = init_weights(spec, x ? static_cast<int>(x->cols()) : core.graph.n(), rng);
    model.loss_trace = run_epochs(obj, model.weights, cfg, rng, nullptr);
    const Matrix z_core = obj.embed(model.weights);
    model.embedding = propagate_embeddings(g, core.nodes, z_core, cfg.scaling.propagation_t,
                                           derive_seed(cfg.seed, 0x6b636f7265ULL));
    return model;
  }

  const Objective obj(g, x, spec, cfg.w_pos, cfg.modularity);
  model.weights = init_weights(spec, x ? static_cast<int>(x->cols()) : g.n(), rng);

  PairSampler sampler;
  if (scaling == ScalingKind::fastgae) {
    const SamplingConfig& sc = cfg.scaling.sampling;
    const int size = sc.size > 0 ? sc.size : recommended_subgraph_size(g.n(), cfg.scaling.threshold);
    if (size > g.n() && !sc.with_replacement) {
      throw InvalidArgument("subgraph size " + std::to_string(size) + " exceeds the node count " +
                            std::to_string(g.n()));
    }
    check_budget(static_cast<double>(size), cfg, "FastGAE subgraph reconstruction");
    auto p = std::make_shared<std::vector<double>>(
        sampling_distribution(importance_scores(g, sc.method), sc.alpha));
    const bool repl = sc.with_replacement;
    sampler = [p, size, repl](Rng& r) { return sample_nodes(*p, size, repl, r); };
  } else {
    check_budget(static_cast<double>(g.n()), cfg, "full-batch training");
  }

  model.loss_trace = run_epochs(obj, model.weights, cfg, rng, sampler);
  model.embedding = obj.embed(model.weights);
  return model;
}

}  // namespace gae
