#include "config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace gaecli {
namespace {

using gae::InvalidArgument;

const std::vector<std::string> kGridParams = {"lambda_enc", "beta_mod", "gamma_mod", "prior_s", "lr", "epochs"};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& expected) {
  throw InvalidArgument("config: key '" + key + "' has invalid value '" + value + "' (expected " + expected + ")");
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(x)) bad_value(key, v, "a finite number");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  char* end = nullptr;
  errno = 0;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || errno == ERANGE) bad_value(key, v, "an integer");
  return x;
}

int to_positive_int(const std::string& key, const std::string& v) {
  const long long x = to_int(key, v);
  if (x < 1 || x > 1'000'000'000) bad_value(key, v, "a positive integer");
  return static_cast<int>(x);
}

int to_nonnegative_int(const std::string& key, const std::string& v) {
  const long long x = to_int(key, v);
  if (x < 0 || x > 1'000'000'000) bad_value(key, v, "a non-negative integer");
  return static_cast<int>(x);
}

std::uint64_t to_seed(const std::string& key, const std::string& v) {
  char* end = nullptr;
  errno = 0;
  if (v.empty() || v[0] == '-') bad_value(key, v, "a non-negative integer");
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (*end != '\0' || errno == ERANGE) bad_value(key, v, "a non-negative integer");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  bad_value(key, v, "true or false");
}

double to_nonnegative(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x < 0.0) bad_value(key, v, "a non-negative number");
  return x;
}

double to_positive(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x <= 0.0) bad_value(key, v, "a positive number");
  return x;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename Parse>
auto with_key(const std::string& key, const std::string& value, Parse parse) {
  try {
    return parse(value);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument("config: key '" + key + "': " + e.what());
  }
}

Task parse_task(const std::string& key, const std::string& v) {
  if (v == "link_prediction") return Task::link_prediction;
  if (v == "community_detection") return Task::community_detection;
  if (v == "joint") return Task::joint;
  if (v == "directed_task2") return Task::directed_task2;
  if (v == "directed_task3") return Task::directed_task3;
  if (v == "ranking") return Task::ranking;
  bad_value(key, v,
            "link_prediction, community_detection, joint, directed_task2, directed_task3 or ranking");
}

GraphFormat parse_format(const std::string& key, const std::string& v) {
  if (v == "edgelist") return GraphFormat::edgelist;
  if (v == "linqs") return GraphFormat::linqs;
  if (v == "pubmed") return GraphFormat::pubmed;
  bad_value(key, v, "edgelist, linqs or pubmed");
}

bool is_known_key(const std::string& key) {
  for (const auto& [name, value] : default_values()) {
    if (name == key) return true;
  }
  return false;
}

/// Validates one sweep parameter value by parsing it as the base key would be.
void check_grid_value(const std::string& param, const std::string& v) {
  const std::string key = "grid." + param;
  if (param == "prior_s" || param == "epochs") {
    to_positive_int(key, v);
  } else if (param == "lr") {
    to_positive(key, v);
  } else {
    to_nonnegative(key, v);
  }
}

}  // namespace

std::string to_string(Task task) {
  switch (task) {
    case Task::link_prediction: return "link_prediction";
    case Task::community_detection: return "community_detection";
    case Task::joint: return "joint";
    case Task::directed_task2: return "directed_task2";
    case Task::directed_task3: return "directed_task3";
    case Task::ranking: return "ranking";
  }
  return "unknown";
}

const std::vector<std::pair<std::string, std::string>>& default_values() {
  static const std::vector<std::pair<std::string, std::string>> values = {
      {"graph", ""},
      {"graph_format", "edgelist"},
      {"cites", ""},
      {"directed", "false"},
      {"symmetrize", "false"},
      {"features", "none"},
      {"labels", "auto"},
      {"encoder", "gcn"},
      {"variational", "false"},
      {"decoder", "inner_product"},
      {"lambda_grav", "1"},
      {"operator", "symmetric"},
      {"hidden_dim", "32"},
      {"embedding_dim", "16"},
      {"prior", "none"},
      {"prior_s", "1"},
      {"lambda_enc", "0"},
      {"beta_mod", "0"},
      {"gamma_mod", "0"},
      {"epochs", "200"},
      {"lr", "0.01"},
      {"w_pos", "auto"},
      {"scaling", "full"},
      {"core_k", "2"},
      {"propagation_t", "10"},
      {"sample_method", "degree"},
      {"sample_alpha", "1"},
      {"sample_size", "0"},
      {"with_replacement", "false"},
      {"pair_budget", "1e9"},
      {"task", "link_prediction"},
      {"metrics", ""},
      {"val_frac", "0.05"},
      {"test_frac", "0.10"},
      {"clusters", "0"},
      {"rank_k", "10"},
      {"runs", "1"},
      {"seed", "0"},
      {"output_dir", ""},
      {"grid.lambda_enc", ""},
      {"grid.beta_mod", ""},
      {"grid.gamma_mod", ""},
      {"grid.prior_s", ""},
      {"grid.lr", ""},
      {"grid.epochs", ""},
  };
  return values;
}

ConfigValues parse_config_text(const std::string& text, const std::string& origin) {
  ConfigValues out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!is_known_key(key)) {
      throw InvalidArgument(origin + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!out.emplace(key, trim(line.substr(eq + 1))).second) {
      throw InvalidArgument(origin + ":" + std::to_string(line_no) + ": key '" + key + "' set twice");
    }
  }
  return out;
}

ConfigValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::pair<std::string, std::string> parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw InvalidArgument("override '" + text + "' is not key=value");
  std::string key = trim(text.substr(0, eq));
  if (!is_known_key(key)) throw InvalidArgument("override: unknown key '" + key + "'");
  return {std::move(key), trim(text.substr(eq + 1))};
}

ConfigValues merge_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides) {
  ConfigValues values(default_values().begin(), default_values().end());
  if (path) {
    for (auto& [key, value] : read_config_file(*path)) values[key] = value;
  }
  for (const std::string& o : overrides) {
    auto [key, value] = parse_override(o);
    values[key] = value;
  }
  return values;
}

RunConfig build_run_config(const ConfigValues& values) {
  for (const auto& [key, value] : values) {
    if (!is_known_key(key)) throw InvalidArgument("config: unknown key '" + key + "'");
  }
  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = values.find(key);
    if (it == values.end()) throw InvalidArgument("config: missing key '" + key + "'");
    return it->second;
  };

  RunConfig c;
  c.data.graph = get("graph");
  c.data.format = parse_format("graph_format", get("graph_format"));
  c.data.cites = get("cites");
  c.data.directed = to_bool("directed", get("directed"));
  c.data.symmetrize = to_bool("symmetrize", get("symmetrize"));
  c.data.features = get("features");
  c.data.labels = get("labels");
  if (c.data.format != GraphFormat::edgelist && c.data.cites.empty()) {
    throw InvalidArgument("config: key 'cites' is required when graph_format is " + get("graph_format"));
  }
  if (c.data.format == GraphFormat::edgelist && c.data.features == "dataset") {
    bad_value("features", "dataset", "none or a path for edge-list graphs");
  }

  c.spec.encoder = with_key("encoder", get("encoder"), gae::parse_encoder_kind);
  c.spec.variational = to_bool("variational", get("variational"));
  c.spec.decoder.kind = with_key("decoder", get("decoder"), gae::parse_decoder_kind);
  c.spec.decoder.lambda_grav = to_nonnegative("lambda_grav", get("lambda_grav"));
  c.spec.op.kind = with_key("operator", get("operator"), gae::parse_operator_kind);
  c.spec.hidden_dim = to_positive_int("hidden_dim", get("hidden_dim"));
  c.spec.embedding_dim = to_positive_int("embedding_dim", get("embedding_dim"));

  const std::string& prior = get("prior");
  if (prior == "none") {
    c.prior = PriorKind::none;
  } else if (prior == "louvain") {
    c.prior = PriorKind::louvain;
  } else {
    bad_value("prior", prior, "none or louvain");
  }
  c.tunables.prior_s = to_positive_int("prior_s", get("prior_s"));
  c.tunables.lambda_enc = to_nonnegative("lambda_enc", get("lambda_enc"));
  c.tunables.beta_mod = to_nonnegative("beta_mod", get("beta_mod"));
  c.tunables.gamma_mod = to_nonnegative("gamma_mod", get("gamma_mod"));
  c.tunables.epochs = to_positive_int("epochs", get("epochs"));
  c.tunables.learning_rate = to_positive("lr", get("lr"));

  const std::string& w_pos = get("w_pos");
  if (w_pos != "auto") c.train.w_pos = to_positive("w_pos", w_pos);
  c.train.scaling.kind = with_key("scaling", get("scaling"), gae::parse_scaling_kind);
  c.train.scaling.core_k = to_nonnegative_int("core_k", get("core_k"));
  c.train.scaling.propagation_t = to_nonnegative_int("propagation_t", get("propagation_t"));
  c.train.scaling.sampling.method = with_key("sample_method", get("sample_method"), gae::parse_importance_method);
  c.train.scaling.sampling.alpha = to_nonnegative("sample_alpha", get("sample_alpha"));
  c.train.scaling.sampling.size = to_nonnegative_int("sample_size", get("sample_size"));
  c.train.scaling.sampling.with_replacement = to_bool("with_replacement", get("with_replacement"));
  c.train.pair_budget = to_positive("pair_budget", get("pair_budget"));

  c.task = parse_task("task", get("task"));
  const std::vector<std::string> available = task_metrics(c.task);
  c.metrics = split_list(get("metrics"));
  if (c.metrics.empty()) c.metrics = available;
  for (const std::string& m : c.metrics) {
    if (std::find(available.begin(), available.end(), m) == available.end()) {
      std::string list;
      for (const std::string& a : available) list += (list.empty() ? "" : ", ") + a;
      throw InvalidArgument("config: key 'metrics': '" + m + "' is not produced by task " + to_string(c.task) +
                            " (available: " + list + ")");
    }
  }
  c.val_frac = to_nonnegative("val_frac", get("val_frac"));
  c.test_frac = to_positive("test_frac", get("test_frac"));
  if (c.val_frac + c.test_frac >= 1.0) {
    throw InvalidArgument("config: val_frac + test_frac must be below 1");
  }
  c.clusters = to_nonnegative_int("clusters", get("clusters"));
  c.rank_k = to_positive_int("rank_k", get("rank_k"));
  c.runs = to_positive_int("runs", get("runs"));
  c.seed = to_seed("seed", get("seed"));

  c.output_dir = get("output_dir");
  if (c.output_dir.empty()) {
    const char* env = std::getenv("GAE_OUTPUT_DIR");
    c.output_dir = env != nullptr && *env != '\0' ? env : ".";
  }

  for (const std::string& param : kGridParams) {
    std::vector<std::string> candidates = split_list(get("grid." + param));
    for (const std::string& v : candidates) check_grid_value(param, v);
    if (!candidates.empty()) c.grid.emplace(param, std::move(candidates));
  }

  bool needs_prior = c.tunables.lambda_enc > 0.0;
  if (const auto it = c.grid.find("lambda_enc"); it != c.grid.end()) {
    for (const std::string& v : it->second) needs_prior = needs_prior || to_double("grid.lambda_enc", v) > 0.0;
  }
  if (needs_prior && c.prior == PriorKind::none) {
    throw InvalidArgument("config: key 'lambda_enc' is positive but 'prior' is none; set prior = louvain");
  }

  apply_tunables(c, c.tunables);
  return c;
}

void apply_tunables(RunConfig& config, const Tunables& t) {
  config.tunables = t;
  config.spec.op.lambda_enc = t.lambda_enc;
  config.train.learning_rate = t.learning_rate;
  config.train.epochs = t.epochs;
  if (t.beta_mod > 0.0) {
    config.train.modularity = gae::ModularityReg{t.beta_mod, t.gamma_mod};
  } else {
    config.train.modularity.reset();
  }
}

std::string format_config(const ConfigValues& values) {
  std::string out;
  for (const auto& [key, value] : default_values()) {
    const auto it = values.find(key);
    out += key + " = " + (it == values.end() ? value : it->second) + "\n";
  }
  return out;
}

std::vector<std::string> task_metrics(Task task) {
  switch (task) {
    case Task::link_prediction:
    case Task::directed_task2:
    case Task::directed_task3: return {"auc", "ap"};
    case Task::community_detection: return {"ami", "ari", "modularity"};
    case Task::joint: return {"auc", "ap", "ami", "ari", "modularity"};
    case Task::ranking: return {"recall", "map", "ndcg"};
  }
  return {};
}

}  // namespace gaecli
