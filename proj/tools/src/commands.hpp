#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gaecli {

struct ConfigArgs {
  std::optional<std::string> config;
  std::vector<std::string> overrides;
};

struct GraphArgs {
  std::string graph;
  bool directed = false;
};

struct PrepareArgs {
  std::string format = "edgelist";
  std::string input;
  std::string cites;
  bool directed = false;
  bool symmetrize = false;
  std::string out;
};

struct KCoreArgs {
  GraphArgs input;
  int k = 2;
  std::string out;
  std::string graph_out;
};

struct SampleArgs {
  GraphArgs input;
  std::string method = "degree";
  double alpha = 1.0;
  int size = 0;
  std::uint64_t seed = 0;
  bool with_replacement = false;
  std::string out;
};

struct SweepArgs {
  ConfigArgs config;
  int jobs = 1;
};

struct ClusterArgs {
  GraphArgs input;
  std::string method = "louvain";
  std::string embeddings;
  int k = 0;
  int level = -1;
  std::uint64_t seed = 0;
  std::string labels;
  std::string out;
};

struct RankArgs {
  std::string checkpoint;
  std::vector<int> queries;
  int k = 10;
  std::string out;
};

struct RetrofitArgs {
  std::string vectors;
  std::string edges;
  int max_iters = 100;
  double tol = 1e-6;
  std::string order = "jacobi";
  std::string out;
};

int cmd_prepare(const PrepareArgs& args);
int cmd_kcore(const KCoreArgs& args);
int cmd_sample(const SampleArgs& args);
int cmd_train(const ConfigArgs& args);
int cmd_evaluate(const ConfigArgs& args);
int cmd_sweep(const SweepArgs& args);
int cmd_cluster(const ClusterArgs& args);
int cmd_rank(const RankArgs& args);
int cmd_retrofit(const RetrofitArgs& args);

}  // namespace gaecli
