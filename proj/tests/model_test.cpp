#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "gae/clustering.hpp"
#include "gae/model.hpp"
#include "support/graphs.hpp"
#include "support/properties.hpp"

namespace gae {
namespace {

using testing::make_graph;

ModelSpec small_spec(EncoderKind encoder, bool variational, DecoderKind decoder = DecoderKind::inner_product) {
  ModelSpec spec;
  spec.encoder = encoder;
  spec.variational = variational;
  spec.hidden_dim = 8;
  spec.embedding_dim = 4;
  spec.decoder.kind = decoder;
  return spec;
}

TEST(Encoders, LinearExamples) {
  const Operator id = symmetric_normalize(SparseGraph::empty(3));
  const Matrix eye = Matrix::Identity(3, 3);
  EXPECT_EQ(encode_linear(id, &eye, eye), eye);
  const Operator op = symmetric_normalize(testing::triangle());
  Matrix w(3, 2);
  w << 1, 2, 3, 4, 5, 6;
  EXPECT_EQ(encode_linear(op, nullptr, w), apply(op, w));
  EXPECT_EQ(encode_linear(op, nullptr, Matrix::Zero(3, 2)), Matrix::Zero(3, 2));
  EXPECT_THROW(encode_linear(op, nullptr, Matrix::Zero(4, 2)), InvalidArgument);
}

TEST(Encoders, GcnExamples) {
  const SparseGraph g = testing::two_triangles_bridge();
  const Operator op = symmetric_normalize(g);
  Rng rng(1);
  const Matrix w1 = standard_normal(5, 3, rng);
  EXPECT_EQ(encode_gcn2(op, op, nullptr, Matrix::Zero(6, 5), w1), Matrix::Zero(6, 3));
  const Matrix w0 = standard_normal(6, 5, rng);
  OperatorSpec plain;
  OperatorSpec mixed;
  mixed.lambda_enc = 0.0;
  mixed.prior = make_graph(6, {{0, 5}, {1, 4}});
  const EncoderOperators a = build_operators(g, plain);
  const EncoderOperators b = build_operators(g, mixed);
  EXPECT_EQ(encode_gcn2(a.outer, a.inner, nullptr, w0, w1), encode_gcn2(b.outer, b.inner, nullptr, w0, w1));
  // An identity outer operator and W1 = I expose the hidden activations.
  const Operator identity = symmetric_normalize(SparseGraph::empty(6));
  const Matrix hidden_probe = encode_gcn2(identity, op, nullptr, w0, Matrix::Identity(5, 5));
  EXPECT_GE(hidden_probe.minCoeff(), 0.0);
}

TEST(Reparameterize, VanishingNoiseSeededAndUnbiased) {
  Rng rng(2);
  const Matrix mu = standard_normal(4, 3, rng);
  const Matrix tiny = Matrix::Constant(4, 3, -30.0);
  EXPECT_LT((reparameterize(mu, tiny, 5) - mu).cwiseAbs().maxCoeff(), 1e-9);
  const Matrix ls = Matrix::Constant(4, 3, std::log(0.7));
  EXPECT_EQ(reparameterize(mu, ls, 5), reparameterize(mu, ls, 5));
  const int draws = 100000;
  const Matrix big_mu = Matrix::Constant(draws, 1, 1.5);
  const Matrix big_ls = Matrix::Constant(draws, 1, std::log(0.5));
  const double mean = reparameterize(big_mu, big_ls, 11).mean();
  EXPECT_LT(std::abs(mean - 1.5), 3.0 * 0.5 / std::sqrt(static_cast<double>(draws)));
}

TEST(Decoders, HandValues) {
  Matrix z(2, 2);
  z << 1, 0, 0, 1;
  const std::vector<NodePair> pairs = {{0, 1}, {1, 0}};
  EXPECT_DOUBLE_EQ(decode(z, pairs, DecoderConfig{})[0], 0.5);

  DecoderConfig grav{DecoderKind::gravity, 1.0, 1e-16};
  Matrix zg(2, 3);
  zg << 0, 0, 0, 1, 0, 2;
  const std::vector<double> p = decode(zg, pairs, grav);
  EXPECT_NEAR(p[0], 1.0 / (1.0 + std::exp(-2.0)), 1e-15);
  EXPECT_DOUBLE_EQ(p[1], 0.5);

  Matrix unit(2, 3);
  unit << 0, 0, 5, 1, 0, 0;
  EXPECT_DOUBLE_EQ(decode(unit, std::vector<NodePair>{{0, 1}}, grav)[0], 0.5);

  DecoderConfig st{DecoderKind::source_target, 1.0, 1e-16};
  EXPECT_THROW(decode(Matrix::Zero(2, 3), pairs, st), InvalidArgument);
}

TEST(Decoders, GravityClampsCoincidentPoints) {
  DecoderConfig grav{DecoderKind::gravity, 1.0, 1e-16};
  Matrix z = Matrix::Zero(2, 3);
  const double logit = decode_logits(z, std::vector<NodePair>{{0, 1}}, grav)[0];
  EXPECT_NEAR(logit, -std::log(1e-16), 1e-9);
}

TEST(Decoders, InnerProductIsExactlySymmetric) {
  Rng rng(3);
  const Matrix z = standard_normal(10, 7, rng);
  const Matrix logits = dense_logits(z, DecoderConfig{});
  EXPECT_TRUE(logits == logits.transpose());
}

TEST(Decoders, GravityFarthestNeverRisesWithLambda) {
  Matrix z(5, 3);
  z << 0, 0, 1, 1, 0, 1, 0, 2, 1, -3, 0, 1, 0.5, 0.5, 1;
  int previous_rank = -1;
  for (double lambda : {0.0, 0.1, 0.5, 1.0, 3.0}) {
    const auto ranked = rank_neighbors(z, DecoderConfig{DecoderKind::gravity, lambda, 1e-16}, std::vector<int>{0}, 4);
    const auto it = std::find_if(ranked[0].begin(), ranked[0].end(), [](const RankedCandidate& c) { return c.node == 3; });
    const int rank = static_cast<int>(it - ranked[0].begin());
    EXPECT_GE(rank, previous_rank);
    previous_rank = rank;
  }
}

TEST(Losses, ReconstructionExamples) {
  const Matrix labels_a = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  EXPECT_NEAR(loss_reconstruction(Matrix::Zero(2, 2), labels_a, 1.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(loss_reconstruction(Matrix::Zero(2, 2), labels_a, 2.0), 1.5 * std::log(2.0), 1e-15);
  const Matrix perfect = 60.0 * labels_a - Matrix::Constant(2, 2, 30.0);
  EXPECT_LT(loss_reconstruction(perfect, labels_a, 1.0), 1e-9);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(loss_reconstruction(bad, labels_a, 1.0), NumericError);
}

TEST(Losses, KlExamplesAndQuadratureOracle) {
  EXPECT_EQ(kl_gaussian(Matrix::Zero(3, 2), Matrix::Zero(3, 2)), 0.0);
  EXPECT_DOUBLE_EQ(kl_gaussian(Matrix::Constant(1, 1, 1.0), Matrix::Zero(1, 1)), 0.5);
  Rng rng(4);
  std::uniform_real_distribution<double> u_mu(-2.0, 2.0);
  std::uniform_real_distribution<double> u_ls(-1.0, 0.8);
  for (int trial = 0; trial < 5; ++trial) {
    const double mu = u_mu(rng);
    const double sigma = std::exp(u_ls(rng));
    // Composite Simpson on q log(q / p) over mu +- 12 sigma.
    const int steps = 20000;
    const double lo = mu - 12 * sigma;
    const double h = 24 * sigma / steps;
    double integral = 0.0;
    for (int s = 0; s <= steps; ++s) {
      const double x = lo + s * h;
      const double log_q = -0.5 * std::log(2 * M_PI) - std::log(sigma) - 0.5 * (x - mu) * (x - mu) / (sigma * sigma);
      const double log_p = -0.5 * std::log(2 * M_PI) - 0.5 * x * x;
      const double f = std::exp(log_q) * (log_q - log_p);
      const double weight = (s == 0 || s == steps) ? 1.0 : (s % 2 == 1 ? 4.0 : 2.0);
      integral += weight * f;
    }
    integral *= h / 3.0;
    EXPECT_NEAR(kl_gaussian(Matrix::Constant(1, 1, mu), Matrix::Constant(1, 1, std::log(sigma))), integral, 1e-6);
  }
}

TEST(Losses, ModularityRegularizerExamples) {
  const SparseGraph tri = testing::triangle();
  Rng rng(5);
  const Matrix z = standard_normal(3, 2, rng);
  EXPECT_EQ(loss_modularity_reg(z, tri, 0.0, 1.0), 0.0);
  EXPECT_EQ(loss_modularity_reg(Matrix::Ones(3, 2), tri, 0.8, 1.0), 0.0);
  Matrix far(3, 2);
  far << 0, 0, 10, 0, 0, 10;
  EXPECT_NEAR(loss_modularity_reg(far, tri, 1.0, 1000.0), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(loss_modularity_reg(Matrix::Zero(3, 2), SparseGraph::empty(3), 1.0, 1.0), InvalidArgument);
}

TEST(Losses, ZeroIdentitiesAreExact) { EXPECT_TRUE(testing::zero_identities_exact()); }

TEST(Losses, DefaultPositiveWeight) {
  EXPECT_DOUBLE_EQ(default_positive_weight(make_graph(4, {{0, 1}})), 10.0 / 6.0);
  EXPECT_DOUBLE_EQ(default_positive_weight(testing::triangle()), 1.0);
}

TEST(Gradients, EveryCombinationMatchesFiniteDifferences) {
  const std::vector<testing::GradientCase> cases = testing::gradient_check_suite();
  EXPECT_GE(cases.size(), 20u);
  for (const auto& c : cases) {
    EXPECT_LT(c.max_rel_error, 1e-4) << c.name;
    EXPECT_GT(c.parameters, 0) << c.name;
  }
}

double mean_probability(const Matrix& z, const DecoderConfig& cfg, bool same_clique, int k) {
  double total = 0.0;
  int count = 0;
  for (int i = 0; i < 2 * k; ++i) {
    for (int j = 0; j < 2 * k; ++j) {
      if (i == j || ((i < k) == (j < k)) != same_clique) continue;
      total += sigmoid(decode_logit(z, i, j, cfg));
      ++count;
    }
  }
  return total / count;
}

TEST(Train, TwoCliquesSeparate) {
  const SparseGraph g = testing::two_cliques(4);
  ModelSpec spec = small_spec(EncoderKind::linear, false);
  spec.embedding_dim = 8;
  TrainConfig cfg;
  cfg.seed = 3;
  const TrainedModel model = train(g, nullptr, spec, cfg);
  EXPECT_EQ(model.loss_trace.size(), 200u);
  EXPECT_GT(mean_probability(model.embedding, spec.decoder, true, 4),
            mean_probability(model.embedding, spec.decoder, false, 4));
  EXPECT_LE(model.loss_trace.back(), model.loss_trace.front());
}

TEST(Train, ZeroModularityConfigReducesToStandard) {
  const SparseGraph g = testing::two_cliques(4);
  ModelSpec standard = small_spec(EncoderKind::gcn2, false);
  ModelSpec aware = standard;
  aware.op.lambda_enc = 0.0;
  aware.op.prior = membership_operators(Partition::from_labels({0, 0, 0, 0, 1, 1, 1, 1}), 2, 0.0, 1).a_s;
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.seed = 7;
  TrainConfig aware_cfg = cfg;
  aware_cfg.modularity = ModularityReg{0.0, 2.0};
  EXPECT_EQ(train(g, nullptr, standard, cfg).loss_trace, train(g, nullptr, aware, aware_cfg).loss_trace);
}

TEST(Train, VariationalRunsAreBitIdentical) {
  const SparseGraph g = testing::random_connected(15, 0.2, 8);
  const ModelSpec spec = small_spec(EncoderKind::gcn2, true, DecoderKind::gravity);
  TrainConfig cfg;
  cfg.epochs = 25;
  cfg.seed = 42;
  const TrainedModel a = train(g, nullptr, spec, cfg);
  const TrainedModel b = train(g, nullptr, spec, cfg);
  EXPECT_EQ(a.loss_trace, b.loss_trace);
  EXPECT_EQ(a.embedding, b.embedding);
  cfg.seed = 43;
  EXPECT_NE(train(g, nullptr, spec, cfg).loss_trace, a.loss_trace);
}

TEST(Train, LossDecreasesAcrossConfigurations) {
  const SparseGraph g = testing::planted_partition(6, 50, 0.15, 0.005, 2);
  for (ScalingKind scaling : {ScalingKind::full, ScalingKind::kcore, ScalingKind::fastgae}) {
    for (bool variational : {false, true}) {
      ModelSpec spec;
      spec.variational = variational;
      TrainConfig cfg;
      cfg.seed = 5;
      cfg.scaling.kind = scaling;
      const TrainedModel model = train(g, nullptr, spec, cfg);
      EXPECT_EQ(model.embedding.rows(), g.n());
      for (double v : model.loss_trace) EXPECT_TRUE(std::isfinite(v));
      EXPECT_LE(model.loss_trace.back(), model.loss_trace.front()) << to_string(scaling) << " " << variational;
    }
  }
}

TEST(Train, FullScalingRefusesAboveBudget) {
  const SparseGraph g = testing::random_connected(20, 0.2, 1);
  TrainConfig cfg;
  cfg.pair_budget = 100.0;
  try {
    train(g, nullptr, small_spec(EncoderKind::linear, false), cfg);
    FAIL() << "expected a refusal";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("pair budget of 100"), std::string::npos) << e.what();
  }
}

TEST(Train, RejectsInvalidConfig) {
  const SparseGraph g = testing::triangle();
  TrainConfig cfg;
  cfg.epochs = 0;
  EXPECT_THROW(train(g, nullptr, small_spec(EncoderKind::linear, false), cfg), InvalidArgument);
  cfg.epochs = 2;
  cfg.w_pos = 0.5;
  EXPECT_THROW(train(g, nullptr, small_spec(EncoderKind::linear, false), cfg), InvalidArgument);
}

struct FeaturedModel {
  SparseGraph graph;
  FeatureMatrix x;
  TrainedModel model;
};

FeaturedModel featured_model(EncoderKind encoder, DecoderKind decoder) {
  FeaturedModel out;
  out.graph = testing::random_connected(10, 0.25, 6);
  Rng rng(9);
  out.x = standard_normal(10, 3, rng);
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.seed = 1;
  out.model = train(out.graph, &out.x, small_spec(encoder, false, decoder), cfg);
  return out;
}

TEST(InferNewNodes, DuplicateNodeGetsIdenticalEmbedding) {
  const FeaturedModel fm = featured_model(EncoderKind::gcn2, DecoderKind::gravity);
  std::vector<Edge> edges = fm.graph.edges();
  for (int u : fm.graph.neighbors(0)) edges.push_back({10, u, 1.0});
  const SparseGraph aug = SparseGraph::from_edges(11, false, edges);
  FeatureMatrix xa(11, 3);
  xa.topRows(10) = fm.x;
  xa.row(10) = fm.x.row(0);
  const std::vector<int> nodes = {0, 10};
  const Matrix z = infer_new_nodes(fm.model, aug, xa, nodes);
  EXPECT_EQ(z.rows(), 2);
  EXPECT_EQ(z.cols(), fm.model.spec.output_dim());
  EXPECT_LT((z.row(0) - z.row(1)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(InferNewNodes, IsolatedNodeUnderLinearEncoder) {
  const FeaturedModel fm = featured_model(EncoderKind::linear, DecoderKind::inner_product);
  const SparseGraph aug = SparseGraph::from_edges(12, false, fm.graph.edges());
  FeatureMatrix xa(12, 3);
  xa.topRows(10) = fm.x;
  xa.row(10) << 0.3, -1.0, 2.0;
  xa.row(11) << 1.0, 1.0, 1.0;
  const std::vector<int> nodes = {10, 11};
  const Matrix z = infer_new_nodes(fm.model, aug, xa, nodes);
  EXPECT_EQ(z.rows(), 2);
  const Matrix expected = xa.bottomRows(2) * fm.model.weights.mean.w0;
  EXPECT_LT((z - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(InferNewNodes, FeaturelessModelIsRejected) {
  const SparseGraph g = testing::triangle();
  TrainConfig cfg;
  cfg.epochs = 2;
  const TrainedModel model = train(g, nullptr, small_spec(EncoderKind::linear, false), cfg);
  try {
    infer_new_nodes(model, g, Matrix::Identity(3, 3), std::vector<int>{0});
    FAIL() << "expected an error";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("transductive"), std::string::npos);
  }
}

TEST(RankNeighbors, PicksTopScoreAndBreaksTiesById) {
  Matrix z(3, 1);
  z << 1.0, std::log(9.0), -std::log(9.0);
  const auto top = rank_neighbors(z, DecoderConfig{}, std::vector<int>{0}, 1);
  ASSERT_EQ(top[0].size(), 1u);
  EXPECT_EQ(top[0][0].node, 1);
  EXPECT_NEAR(top[0][0].score, 0.9, 1e-12);

  const Matrix flat = Matrix::Zero(4, 2);
  const auto ties = rank_neighbors(flat, DecoderConfig{}, std::vector<int>{2}, 3);
  EXPECT_EQ(ties[0][0].node, 0);
  EXPECT_EQ(ties[0][1].node, 1);
  EXPECT_EQ(ties[0][2].node, 3);
  EXPECT_THROW(rank_neighbors(flat, DecoderConfig{}, std::vector<int>{0}, 4), InvalidArgument);
  EXPECT_THROW(rank_neighbors(flat, DecoderConfig{}, std::vector<int>{0}, 0), InvalidArgument);
}

TEST(RankNeighbors, GravityFollowsMasses) {
  Matrix z(4, 3);
  z << 0, 0, 0, 1, 0, 0.5, 0, 1, 2.0, -1, 0, 1.0;
  const DecoderConfig grav{DecoderKind::gravity, 1.0, 1e-16};
  const auto ranked = rank_neighbors(z, grav, std::vector<int>{0}, 3);
  EXPECT_EQ(ranked[0][0].node, 2);
  EXPECT_EQ(ranked[0][1].node, 3);
  EXPECT_EQ(ranked[0][2].node, 1);

  Rng rng(12);
  const Matrix zr = standard_normal(8, 4, rng);
  const DecoderConfig flat_lambda{DecoderKind::gravity, 0.0, 1e-16};
  std::vector<int> queries(8);
  std::iota(queries.begin(), queries.end(), 0);
  const auto all = rank_neighbors(zr, flat_lambda, queries, 7);
  std::vector<int> by_mass(8);
  std::iota(by_mass.begin(), by_mass.end(), 0);
  std::stable_sort(by_mass.begin(), by_mass.end(), [&](int a, int b) { return zr(a, 3) > zr(b, 3); });
  for (int q = 0; q < 8; ++q) {
    std::vector<int> expected;
    for (int v : by_mass) {
      if (v != q) expected.push_back(v);
    }
    std::vector<int> got;
    for (const auto& c : all[q]) got.push_back(c.node);
    EXPECT_EQ(got, expected) << "query " << q;
  }
}

TEST(Checkpoint, RoundTripIsExact) {
  const SparseGraph g = testing::planted_partition(2, 6, 0.7, 0.1, 3);
  ModelSpec spec = small_spec(EncoderKind::gcn2, true, DecoderKind::gravity);
  spec.decoder.lambda_grav = 0.37;
  spec.op.lambda_enc = 0.25;
  spec.op.prior = membership_operators(Partition::from_labels({0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1}), 2, 0.25, 4).a_s;
  TrainConfig cfg;
  cfg.epochs = 15;
  cfg.seed = 99;
  cfg.learning_rate = 0.0123;
  cfg.modularity = ModularityReg{0.3, 1.7};
  cfg.scaling.kind = ScalingKind::fastgae;
  cfg.scaling.sampling.size = 7;
  cfg.scaling.sampling.alpha = 1.5;
  const TrainedModel model = train(g, nullptr, spec, cfg);

  std::stringstream first;
  save_checkpoint(first, model);
  std::istringstream in(first.str());
  const TrainedModel back = load_checkpoint(in);
  std::stringstream second;
  save_checkpoint(second, back);
  EXPECT_EQ(first.str(), second.str());
  EXPECT_EQ(back.embedding, model.embedding);
  EXPECT_EQ(back.weights.mean.w0, model.weights.mean.w0);
  EXPECT_EQ(back.weights.log_sigma.w1, model.weights.log_sigma.w1);
  EXPECT_EQ(back.loss_trace, model.loss_trace);
  EXPECT_EQ(back.spec.op.prior, model.spec.op.prior);
  EXPECT_EQ(back.config.modularity->gamma, 1.7);
  EXPECT_EQ(back.config.seed, 99u);
}

TEST(Checkpoint, RejectsForeignInput) {
  std::istringstream in("not-a-checkpoint 1\n");
  EXPECT_THROW(load_checkpoint(in), InvalidArgument);
  std::istringstream future("gaekit-checkpoint 99\n");
  EXPECT_THROW(load_checkpoint(future), InvalidArgument);
}

TEST(FastGae, EpochCostGrowsSubQuadratically) {
  std::vector<double> log_n;
  std::vector<double> log_t;
  for (int n : {2000, 8000, 32000}) {
    const SparseGraph g = testing::random_sparse(n, 2, static_cast<std::uint64_t>(n));
    ModelSpec spec = small_spec(EncoderKind::linear, false);
    spec.embedding_dim = 16;
    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.scaling.kind = ScalingKind::fastgae;
    cfg.scaling.sampling.size = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    double best = 1e300;
    for (int rep = 0; rep < 2; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      train(g, nullptr, spec, cfg);
      best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    log_n.push_back(std::log(static_cast<double>(n)));
    log_t.push_back(std::log(best));
  }
  const double mx = std::accumulate(log_n.begin(), log_n.end(), 0.0) / 3.0;
  const double my = std::accumulate(log_t.begin(), log_t.end(), 0.0) / 3.0;
  double sxy = 0.0;
  double sxx = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxy += (log_n[i] - mx) * (log_t[i] - my);
    sxx += (log_n[i] - mx) * (log_n[i] - mx);
  }
  EXPECT_LT(sxy / sxx, 1.5);
}

}  // namespace
}  // namespace gae
