#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "gae/clustering.hpp"
#include "gae/graph.hpp"
#include "gae/model.hpp"

namespace gaecli {

struct Dataset {
  gae::SparseGraph graph;
  std::optional<gae::FeatureMatrix> features;
  std::optional<gae::Partition> labels;
};

Dataset load_dataset(const DataSource& source);

/// Seed of run r: base seed plus run index.
std::uint64_t run_seed(const RunConfig& config, int run);

/// Model spec and training config for one run on `train_graph`, including the
/// Louvain membership prior when the encoder mixes one in.
struct PreparedModel {
  gae::ModelSpec spec;
  gae::TrainConfig train;
};
PreparedModel prepare_model(const RunConfig& config, const gae::SparseGraph& train_graph, std::uint64_t seed);

gae::TrainedModel train_model(const RunConfig& config, const Dataset& data, const gae::SparseGraph& train_graph,
                              std::uint64_t seed);

/// Checks that the dataset carries what the configured task and metrics need.
void check_task_inputs(const RunConfig& config, const Dataset& data);

struct RunResult {
  int run = 0;
  std::uint64_t seed = 0;
  int n_s = 0;  // nodes seen per training step
  double seconds = 0.0;
  std::map<std::string, double> metrics;
  std::vector<double> loss_trace;
};

RunResult evaluate_run(const RunConfig& config, const Dataset& data, int run);

struct SelectionRun {
  double val_auc = 0.0;
  double modularity = 0.0;
};

/// Validation AUC and k-means modularity on the training graph, for sweeps.
SelectionRun selection_run(const RunConfig& config, const Dataset& data, int run);

/// Nodes touched per training step under the configured scaling.
int nodes_per_step(const RunConfig& config, const gae::SparseGraph& g);

}  // namespace gaecli
