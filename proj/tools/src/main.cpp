#include <exception>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "gae/common.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;

void add_config_options(CLI::App& cmd, gaecli::ConfigArgs& args) {
  cmd.add_option("-c,--config", args.config, "key=value run configuration file");
  cmd.add_option("-s,--set", args.overrides, "override one key, e.g. --set epochs=50")->allow_extra_args(false);
}

void add_graph_options(CLI::App& cmd, gaecli::GraphArgs& args) {
  cmd.add_option("-g,--graph", args.graph, "edge-list file")->required();
  cmd.add_flag("--directed", args.directed, "read arcs instead of undirected edges");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gae: graph autoencoder training, evaluation and retrofitting"};
  app.require_subcommand(1);
  app.footer("Default output directory: $GAE_OUTPUT_DIR, else the working directory.\n"
             "Exit status: 0 success, 1 usage or configuration error, 2 numeric failure.");

  gaecli::PrepareArgs prepare;
  auto* prepare_cmd = app.add_subcommand("prepare", "convert a dataset into graph, feature and label files");
  prepare_cmd->add_option("--format", prepare.format, "edgelist, linqs or pubmed")->capture_default_str();
  prepare_cmd->add_option("-i,--input", prepare.input, "edge list, .content or .NODE.paper.tab file")->required();
  prepare_cmd->add_option("--cites", prepare.cites, ".cites or .DIRECTED.cites.tab file");
  prepare_cmd->add_flag("--directed", prepare.directed, "edge-list input holds arcs");
  prepare_cmd->add_flag("--symmetrize", prepare.symmetrize, "write the undirected view");
  prepare_cmd->add_option("-o,--out", prepare.out, "output directory");

  gaecli::KCoreArgs kcore;
  auto* kcore_cmd = app.add_subcommand("kcore", "extract a k-core and write its node map");
  add_graph_options(*kcore_cmd, kcore.input);
  kcore_cmd->add_option("-k,--k", kcore.k, "core order")->capture_default_str()->check(CLI::NonNegativeNumber);
  kcore_cmd->add_option("-o,--out", kcore.out, "node map TSV (local id, original id)");
  kcore_cmd->add_option("--graph-out", kcore.graph_out, "also write the core as an edge list");

  gaecli::SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "draw a node-importance subgraph sample");
  add_graph_options(*sample_cmd, sample.input);
  sample_cmd->add_option("--method", sample.method, "uniform, degree or core")->capture_default_str();
  sample_cmd->add_option("--alpha", sample.alpha, "sharpening exponent")->capture_default_str();
  sample_cmd->add_option("--size", sample.size, "nodes to draw; 0 uses the recommended size")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  sample_cmd->add_option("--seed", sample.seed, "random seed")->capture_default_str();
  sample_cmd->add_flag("--with-replacement", sample.with_replacement, "keep distinct nodes of independent draws");
  sample_cmd->add_option("-o,--out", sample.out, "node list file");

  gaecli::ConfigArgs train;
  auto* train_cmd = app.add_subcommand("train", "train a model; writes checkpoint, embeddings and loss trace");
  add_config_options(*train_cmd, train);

  gaecli::ConfigArgs evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "run a task over several seeds; writes metrics JSON and CSV");
  add_config_options(*evaluate_cmd, evaluate);

  gaecli::SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "grid search on validation AUC and modularity");
  add_config_options(*sweep_cmd, sweep.config);
  sweep_cmd->add_option("-j,--jobs", sweep.jobs, "concurrent runs")->capture_default_str()->check(CLI::PositiveNumber);

  gaecli::ClusterArgs cluster;
  auto* cluster_cmd = app.add_subcommand("cluster", "Louvain on a graph or k-means on embeddings");
  cluster_cmd->add_option("-g,--graph", cluster.input.graph, "edge-list file");
  cluster_cmd->add_flag("--directed", cluster.input.directed, "read arcs instead of undirected edges");
  cluster_cmd->add_option("--method", cluster.method, "louvain or kmeans")->capture_default_str();
  cluster_cmd->add_option("-e,--embeddings", cluster.embeddings, "embeddings TSV for kmeans");
  cluster_cmd->add_option("-k,--k", cluster.k, "number of k-means clusters");
  cluster_cmd->add_option("--level", cluster.level, "Louvain level; negative counts from the coarsest")
      ->capture_default_str();
  cluster_cmd->add_option("--seed", cluster.seed, "k-means seed")->capture_default_str();
  cluster_cmd->add_option("--labels", cluster.labels, "ground-truth labels for AMI and ARI");
  cluster_cmd->add_option("-o,--out", cluster.out, "partition TSV");

  gaecli::RankArgs rank;
  auto* rank_cmd = app.add_subcommand("rank", "top-k decoded neighbours from a checkpoint");
  rank_cmd->add_option("-m,--checkpoint", rank.checkpoint, "model checkpoint")->required();
  rank_cmd->add_option("-q,--queries", rank.queries, "query nodes; every node when omitted")->delimiter(',');
  rank_cmd->add_option("-k,--k", rank.k, "candidates per query")->capture_default_str()->check(CLI::PositiveNumber);
  rank_cmd->add_option("-o,--out", rank.out, "ranking TSV");

  gaecli::RetrofitArgs retrofit;
  auto* retrofit_cmd = app.add_subcommand("retrofit", "refine concept vectors along ontology relations");
  retrofit_cmd->add_option("--vectors", retrofit.vectors, "tag<TAB>values file")->required();
  retrofit_cmd->add_option("--edges", retrofit.edges, "src<TAB>dst<TAB>kind[<TAB>beta] file")->required();
  retrofit_cmd->add_option("--max-iters", retrofit.max_iters, "sweep limit")->capture_default_str();
  retrofit_cmd->add_option("--tol", retrofit.tol, "largest coordinate change at convergence")->capture_default_str();
  retrofit_cmd->add_option("--order", retrofit.order, "jacobi or gauss_seidel")->capture_default_str();
  retrofit_cmd->add_option("-o,--out", retrofit.out, "retrofitted vectors file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*prepare_cmd) return gaecli::cmd_prepare(prepare);
    if (*kcore_cmd) return gaecli::cmd_kcore(kcore);
    if (*sample_cmd) return gaecli::cmd_sample(sample);
    if (*train_cmd) return gaecli::cmd_train(train);
    if (*evaluate_cmd) return gaecli::cmd_evaluate(evaluate);
    if (*sweep_cmd) return gaecli::cmd_sweep(sweep);
    if (*cluster_cmd) return gaecli::cmd_cluster(cluster);
    if (*rank_cmd) return gaecli::cmd_rank(rank);
    if (*retrofit_cmd) return gaecli::cmd_retrofit(retrofit);
  } catch (const gae::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
