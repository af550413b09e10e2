#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gae/eval.hpp"
#include "gae/model.hpp"

namespace gaecli {

/// Raw key=value pairs after defaults, file and overrides are merged.
using ConfigValues = std::map<std::string, std::string>;

enum class GraphFormat { edgelist, linqs, pubmed };
enum class Task { link_prediction, community_detection, joint, directed_task2, directed_task3, ranking };
enum class PriorKind { none, louvain };

std::string to_string(Task task);

/// Tunable parameters a sweep may vary.
struct Tunables {
  double lambda_enc = 0.0;
  double beta_mod = 0.0;
  double gamma_mod = 0.0;
  int prior_s = 1;
  double learning_rate = 0.01;
  int epochs = 200;
};

struct DataSource {
  std::string graph;
  GraphFormat format = GraphFormat::edgelist;
  std::string cites;
  bool directed = false;
  bool symmetrize = false;
  std::string features;  // "none", "dataset" or a path
  std::string labels;    // "auto", "none", "dataset" or a path
};

struct RunConfig {
  DataSource data;
  gae::ModelSpec spec;
  gae::TrainConfig train;
  PriorKind prior = PriorKind::none;
  Tunables tunables;
  Task task = Task::link_prediction;
  std::vector<std::string> metrics;
  double val_frac = 0.05;
  double test_frac = 0.10;
  int clusters = 0;  // 0: number of distinct labels
  int rank_k = 10;
  int runs = 1;
  std::uint64_t seed = 0;
  std::string output_dir;
  std::map<std::string, std::vector<std::string>> grid;  // parameter -> candidate values
};

/// Every key with its default value, in a stable order.
const std::vector<std::pair<std::string, std::string>>& default_values();

/// Parses a flat "key = value" file; '#' starts a comment.
ConfigValues parse_config_text(const std::string& text, const std::string& origin);
ConfigValues read_config_file(const std::string& path);

/// "key=value" override; throws on a missing '='.
std::pair<std::string, std::string> parse_override(const std::string& text);

/// Defaults, then the file, then overrides. Unknown keys are rejected by name.
ConfigValues merge_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides);

/// Type- and range-checks every value and builds the typed configuration.
RunConfig build_run_config(const ConfigValues& values);

/// Applies sweep values on top of a configuration.
void apply_tunables(RunConfig& config, const Tunables& t);

/// Serializes values back to the file format, one key per line.
std::string format_config(const ConfigValues& values);

/// Metrics a task produces, in output order.
std::vector<std::string> task_metrics(Task task);

}  // namespace gaecli
