#include <cstdlib>
#include <istream>
#include <ostream>

#include "gae/model.hpp"

namespace gae {
namespace {

constexpr const char* kMagic = "gaekit-checkpoint";

void write_matrix(std::ostream& out, const char* name, const Matrix& m) {
  out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string token() {
    std::string t;
    if (!(in_ >> t)) throw InvalidArgument("checkpoint: unexpected end of input");
    return t;
  }

  void expect(const std::string& key) {
    const std::string t = token();
    if (t != key) throw InvalidArgument("checkpoint: expected '" + key + "', found '" + t + "'");
  }

  double real() {
    const std::string t = token();
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0') throw InvalidArgument("checkpoint: bad number '" + t + "'");
    return v;
  }

  long long integer() {
    const std::string t = token();
    char* end = nullptr;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (end == t.c_str() || *end != '\0') throw InvalidArgument("checkpoint: bad integer '" + t + "'");
    return v;
  }

  std::uint64_t unsigned_integer() {
    const std::string t = token();
    char* end = nullptr;
    const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (end == t.c_str() || *end != '\0') throw InvalidArgument("checkpoint: bad integer '" + t + "'");
    return v;
  }

  double real_field(const std::string& key) {
    expect(key);
    return real();
  }

  int int_field(const std::string& key) {
    expect(key);
    return static_cast<int>(integer());
  }

  std::string word_field(const std::string& key) {
    expect(key);
    return token();
  }

  std::optional<double> optional_real(const std::string& key) {
    expect(key);
    const std::string t = token();
    if (t == "none") return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0') throw InvalidArgument("checkpoint: bad number '" + t + "'");
    return v;
  }

  Matrix matrix(const std::string& name) {
    expect("matrix");
    expect(name);
    const long long rows = integer();
    const long long cols = integer();
    if (rows < 0 || cols < 0) throw InvalidArgument("checkpoint: negative matrix shape");
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = real();
    }
    return m;
  }

 private:
  std::istream& in_;
};

}  // namespace

void save_checkpoint(std::ostream& out, const TrainedModel& model) {
  const ModelSpec& s = model.spec;
  const TrainConfig& c = model.config;
  out << kMagic << ' ' << kCheckpointVersion << '\n';
  out << "encoder " << to_string(s.encoder) << '\n';
  out << "variational " << (s.variational ? 1 : 0) << '\n';
  out << "hidden_dim " << s.hidden_dim << '\n';
  out << "embedding_dim " << s.embedding_dim << '\n';
  out << "decoder " << to_string(s.decoder.kind) << '\n';
  out << "lambda_grav " << format_double(s.decoder.lambda_grav) << '\n';
  out << "dist_floor " << format_double(s.decoder.dist_floor) << '\n';
  out << "operator " << to_string(s.op.kind) << '\n';
  out << "lambda_enc " << format_double(s.op.lambda_enc) << '\n';
  const std::vector<Edge> prior_edges = s.op.prior.edges();
  out << "prior " << s.op.prior.n() << ' ' << (s.op.prior.directed() ? 1 : 0) << ' ' << prior_edges.size() << '\n';
  for (const Edge& e : prior_edges) out << e.src << ' ' << e.dst << ' ' << format_double(e.weight) << '\n';

  out << "epochs " << c.epochs << '\n';
  out << "learning_rate " << format_double(c.learning_rate) << '\n';
  out << "w_pos " << (c.w_pos ? format_double(*c.w_pos) : std::string("none")) << '\n';
  out << "scaling " << to_string(c.scaling.kind) << '\n';
  out << "core_k " << c.scaling.core_k << '\n';
  out << "propagation_t " << c.scaling.propagation_t << '\n';
  const SamplingConfig& sc = c.scaling.sampling;
  out << "sampling " << to_string(sc.method) << ' ' << format_double(sc.alpha) << ' ' << sc.size << ' '
      << (sc.with_replacement ? 1 : 0) << ' ' << sc.seed << '\n';
  const ThresholdParams& tp = c.scaling.threshold;
  out << "threshold " << format_double(tp.gamma_dev) << ' ' << format_double(tp.conf) << ' '
      << format_double(tp.eps_cap) << '\n';
  if (c.modularity) {
    out << "modularity " << format_double(c.modularity->beta) << ' ' << format_double(c.modularity->gamma) << '\n';
  } else {
    out << "modularity none\n";
  }
  out << "seed " << c.seed << '\n';
  out << "pair_budget " << format_double(c.pair_budget) << '\n';

  out << "featureless " << (model.featureless ? 1 : 0) << '\n';
  out << "num_nodes " << model.num_nodes << '\n';
  write_matrix(out, "mean.w0", model.weights.mean.w0);
  write_matrix(out, "mean.w1", model.weights.mean.w1);
  write_matrix(out, "log_sigma.w0", model.weights.log_sigma.w0);
  write_matrix(out, "log_sigma.w1", model.weights.log_sigma.w1);
  write_matrix(out, "embedding", model.embedding);
  out << "loss_trace " << model.loss_trace.size() << '\n';
  for (double v : model.loss_trace) out << format_double(v) << '\n';
  out << "end\n";
  if (!out) throw InvalidArgument("checkpoint: write failed");
}

TrainedModel load_checkpoint(std::istream& in) {
  Reader r(in);
  r.expect(kMagic);
  const long long version = r.integer();
  if (version != kCheckpointVersion) {
    throw InvalidArgument("checkpoint: unsupported version " + std::to_string(version) + " (expected " +
                          std::to_string(kCheckpointVersion) + ")");
  }
  TrainedModel model;
  ModelSpec& s = model.spec;
  TrainConfig& c = model.config;
  s.encoder = parse_encoder_kind(r.word_field("encoder"));
  s.variational = r.int_field("variational") != 0;
  s.hidden_dim = r.int_field("hidden_dim");
  s.embedding_dim = r.int_field("embedding_dim");
  s.decoder.kind = parse_decoder_kind(r.word_field("decoder"));
  s.decoder.lambda_grav = r.real_field("lambda_grav");
  s.decoder.dist_floor = r.real_field("dist_floor");
  s.op.kind = parse_operator_kind(r.word_field("operator"));
  s.op.lambda_enc = r.real_field("lambda_enc");
  r.expect("prior");
  const auto prior_n = static_cast<int>(r.integer());
  const bool prior_directed = r.integer() != 0;
  const long long prior_m = r.integer();
  if (prior_n < 0 || prior_m < 0) throw InvalidArgument("checkpoint: bad prior header");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(prior_m));
  for (long long k = 0; k < prior_m; ++k) {
    Edge e;
    e.src = static_cast<int>(r.integer());
    e.dst = static_cast<int>(r.integer());
    e.weight = r.real();
    edges.push_back(e);
  }
  s.op.prior = SparseGraph::from_edges(prior_n, prior_directed, edges);

  c.epochs = r.int_field("epochs");
  c.learning_rate = r.real_field("learning_rate");
  c.w_pos = r.optional_real("w_pos");
  c.scaling.kind = parse_scaling_kind(r.word_field("scaling"));
  c.scaling.core_k = r.int_field("core_k");
  c.scaling.propagation_t = r.int_field("propagation_t");
  r.expect("sampling");
  c.scaling.sampling.method = parse_importance_method(r.token());
  c.scaling.sampling.alpha = r.real();
  c.scaling.sampling.size = static_cast<int>(r.integer());
  c.scaling.sampling.with_replacement = r.integer() != 0;
  c.scaling.sampling.seed = r.unsigned_integer();
  r.expect("threshold");
  c.scaling.threshold.gamma_dev = r.real();
  c.scaling.threshold.conf = r.real();
  c.scaling.threshold.eps_cap = r.real();
  r.expect("modularity");
  const std::string mod = r.token();
  if (mod != "none") {
    char* end = nullptr;
    ModularityReg reg;
    reg.beta = std::strtod(mod.c_str(), &end);
    if (end == mod.c_str() || *end != '\0') throw InvalidArgument("checkpoint: bad number '" + mod + "'");
    reg.gamma = r.real();
    c.modularity = reg;
  }
  r.expect("seed");
  c.seed = r.unsigned_integer();
  c.pair_budget = r.real_field("pair_budget");

  model.featureless = r.int_field("featureless") != 0;
  model.num_nodes = r.int_field("num_nodes");
  model.weights.mean.w0 = r.matrix("mean.w0");
  model.weights.mean.w1 = r.matrix("mean.w1");
  model.weights.log_sigma.w0 = r.matrix("log_sigma.w0");
  model.weights.log_sigma.w1 = r.matrix("log_sigma.w1");
  model.embedding = r.matrix("embedding");
  const long long trace = r.int_field("loss_trace");
  if (trace < 0) throw InvalidArgument("checkpoint: negative trace length");
  model.loss_trace.reserve(static_cast<std::size_t>(trace));
  for (long long k = 0; k < trace; ++k) model.loss_trace.push_back(r.real());
  r.expect("end");
  if (model.embedding.rows() != model.num_nodes || model.embedding.cols() != s.output_dim()) {
    throw InvalidArgument("checkpoint: embedding shape does not match the model");
  }
  return model;
}

}  // namespace gae
