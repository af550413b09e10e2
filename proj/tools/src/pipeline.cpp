#include "pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "gae/degeneracy.hpp"
#include "gae/eval.hpp"
#include "gae/sampling.hpp"

namespace gaecli {
namespace {

using gae::InvalidArgument;

constexpr std::uint64_t kSplitStream = 0x73706c6974;
constexpr std::uint64_t kPriorStream = 0x7072696f72;
constexpr std::uint64_t kKMeansStream = 0x6b6d65616e73;

gae::SparseGraph undirected_view(const gae::SparseGraph& g) { return g.directed() ? g.symmetrized() : g; }

const gae::FeatureMatrix* features_of(const Dataset& data) {
  return data.features ? &*data.features : nullptr;
}

int cluster_count(const RunConfig& config, const Dataset& data) {
  if (config.clusters > 0) return config.clusters;
  if (data.labels) return data.labels->k;
  throw InvalidArgument("clustering needs node labels or a positive 'clusters' value");
}

bool wants(const RunConfig& config, const std::string& metric) {
  return std::find(config.metrics.begin(), config.metrics.end(), metric) != config.metrics.end();
}

gae::EdgeSplit make_split(const RunConfig& config, const gae::SparseGraph& g, gae::LinkTask task,
                          std::uint64_t seed) {
  gae::SplitOptions opts;
  opts.task = task;
  opts.val_frac = config.val_frac;
  opts.test_frac = config.test_frac;
  opts.seed = gae::derive_seed(seed, kSplitStream);
  return gae::split_edges(g, opts);
}

void add_link_metrics(const RunConfig& config, const gae::TrainedModel& model, const gae::EdgeSplit& split,
                      RunResult& out) {
  const gae::LinkScores s = gae::score_link_pairs(model.embedding, model.spec.decoder, split.test_pos, split.test_neg);
  if (wants(config, "auc")) out.metrics["auc"] = s.auc;
  if (wants(config, "ap")) out.metrics["ap"] = s.ap;
}

void add_community_metrics(const RunConfig& config, const Dataset& data, const gae::TrainedModel& model,
                           std::uint64_t seed, RunResult& out) {
  const int k = cluster_count(config, data);
  const gae::Matrix z = model.embedding.leftCols(model.spec.embedding_dim);
  const gae::Partition predicted = gae::kmeans(z, k, gae::derive_seed(seed, kKMeansStream)).partition;
  if (wants(config, "ami")) out.metrics["ami"] = gae::ami(predicted, *data.labels);
  if (wants(config, "ari")) out.metrics["ari"] = gae::ari(predicted, *data.labels);
  if (wants(config, "modularity")) out.metrics["modularity"] = gae::modularity(undirected_view(data.graph), predicted);
}

void add_ranking_metrics(const RunConfig& config, const gae::TrainedModel& model, const gae::EdgeSplit& split,
                         RunResult& out) {
  const gae::SparseGraph& train = split.train;
  std::map<int, std::vector<std::pair<int, double>>> truth;
  for (const auto& [i, j] : split.test_pos) {
    truth[i].emplace_back(j, 1.0);
    if (!train.directed()) truth[j].emplace_back(i, 1.0);
  }
  if (truth.empty()) throw InvalidArgument("ranking: the split has no test edges");
  const int n = train.n();
  gae::RankingMetrics sum;
  for (const auto& [query, relevant] : truth) {
    const std::span<const int> known = train.neighbors(query);
    const int wanted = std::min(n - 1, config.rank_k + static_cast<int>(known.size()));
    const int q[] = {query};
    const auto ranked = gae::rank_neighbors(model.embedding, model.spec.decoder, q, wanted).front();
    std::vector<int> predicted;
    for (const gae::RankedCandidate& c : ranked) {
      if (static_cast<int>(predicted.size()) == config.rank_k) break;
      if (!std::binary_search(known.begin(), known.end(), c.node)) predicted.push_back(c.node);
    }
    const gae::RankingMetrics m = gae::ranking_metrics(predicted, relevant, config.rank_k);
    sum.recall += m.recall;
    sum.map += m.map;
    sum.ndcg += m.ndcg;
  }
  const double queries = static_cast<double>(truth.size());
  if (wants(config, "recall")) out.metrics["recall"] = sum.recall / queries;
  if (wants(config, "map")) out.metrics["map"] = sum.map / queries;
  if (wants(config, "ndcg")) out.metrics["ndcg"] = sum.ndcg / queries;
}

}  // namespace

Dataset load_dataset(const DataSource& source) {
  if (source.graph.empty()) throw InvalidArgument("config: key 'graph' must name an input file");
  Dataset data;
  std::optional<gae::CitationDataset> citation;
  switch (source.format) {
    case GraphFormat::edgelist: {
      gae::LoadOptions opts;
      opts.directed = source.directed;
      data.graph = gae::load_graph_file(source.graph, opts);
      break;
    }
    case GraphFormat::linqs: citation = gae::load_linqs(source.graph, source.cites); break;
    case GraphFormat::pubmed: citation = gae::load_pubmed_tab(source.graph, source.cites); break;
  }
  if (citation) data.graph = citation->graph;
  if (source.symmetrize) data.graph = undirected_view(data.graph);

  if (source.features == "dataset") {
    data.features = citation->features;
  } else if (source.features != "none") {
    data.features = gae::load_features_file(source.features);
    if (data.features->rows() != data.graph.n()) {
      throw InvalidArgument("features file has " + std::to_string(data.features->rows()) + " rows for " +
                            std::to_string(data.graph.n()) + " nodes");
    }
  }

  if (source.labels == "dataset" || (source.labels == "auto" && citation)) {
    if (!citation) throw InvalidArgument("config: labels = dataset needs graph_format linqs or pubmed");
    data.labels = gae::Partition::from_labels(citation->labels);
  } else if (source.labels != "auto" && source.labels != "none") {
    data.labels = gae::Partition::from_labels(gae::load_labels_file(source.labels, data.graph.n()));
  }
  return data;
}

std::uint64_t run_seed(const RunConfig& config, int run) { return config.seed + static_cast<std::uint64_t>(run); }

PreparedModel prepare_model(const RunConfig& config, const gae::SparseGraph& train_graph, std::uint64_t seed) {
  PreparedModel out{config.spec, config.train};
  out.train.seed = seed;
  out.train.scaling.sampling.seed = seed;
  if (config.prior == PriorKind::louvain && config.tunables.lambda_enc > 0.0) {
    const std::vector<gae::Partition> levels = gae::louvain(undirected_view(train_graph));
    const gae::MembershipOperators ops = gae::membership_operators(
        levels.back(), config.tunables.prior_s, config.tunables.lambda_enc, gae::derive_seed(seed, kPriorStream));
    out.spec.op.prior = ops.a_s;
  }
  return out;
}

gae::TrainedModel train_model(const RunConfig& config, const Dataset& data, const gae::SparseGraph& train_graph,
                              std::uint64_t seed) {
  const PreparedModel prepared = prepare_model(config, train_graph, seed);
  return gae::train(train_graph, features_of(data), prepared.spec, prepared.train);
}

void check_task_inputs(const RunConfig& config, const Dataset& data) {
  const bool directed_task = config.task == Task::directed_task2 || config.task == Task::directed_task3;
  if (directed_task && !data.graph.directed()) {
    throw InvalidArgument("task " + to_string(config.task) + " needs a directed graph (set directed = true)");
  }
  if ((wants(config, "ami") || wants(config, "ari")) && !data.labels) {
    throw InvalidArgument("metrics ami and ari need node labels (set 'labels')");
  }
  if (wants(config, "modularity") && config.clusters == 0 && !data.labels) {
    throw InvalidArgument("metric modularity needs node labels or a positive 'clusters' value");
  }
}

int nodes_per_step(const RunConfig& config, const gae::SparseGraph& g) {
  const gae::ScalingConfig& s = config.train.scaling;
  switch (s.kind) {
    case gae::ScalingKind::full: return g.n();
    case gae::ScalingKind::kcore: {
      const gae::CoreDecomposition cores = gae::core_decomposition(g);
      return static_cast<int>(std::count_if(cores.core_number.begin(), cores.core_number.end(),
                                            [&](int c) { return c >= s.core_k; }));
    }
    case gae::ScalingKind::fastgae:
      return s.sampling.size > 0 ? std::min(s.sampling.size, g.n())
                                 : gae::recommended_subgraph_size(g.n(), s.threshold);
  }
  return g.n();
}

RunResult evaluate_run(const RunConfig& config, const Dataset& data, int run) {
  RunResult out;
  out.run = run;
  out.seed = run_seed(config, run);
  const auto start = std::chrono::steady_clock::now();

  gae::TrainedModel model;
  switch (config.task) {
    case Task::link_prediction:
    case Task::directed_task2:
    case Task::directed_task3: {
      const gae::LinkTask kind = config.task == Task::link_prediction  ? gae::LinkTask::general
                                 : config.task == Task::directed_task2 ? gae::LinkTask::biased_negative
                                                                       : gae::LinkTask::bidirectionality;
      const gae::EdgeSplit split = make_split(config, data.graph, kind, out.seed);
      model = train_model(config, data, split.train, out.seed);
      out.n_s = nodes_per_step(config, split.train);
      add_link_metrics(config, model, split, out);
      break;
    }
    case Task::community_detection:
      model = train_model(config, data, data.graph, out.seed);
      out.n_s = nodes_per_step(config, data.graph);
      add_community_metrics(config, data, model, out.seed, out);
      break;
    case Task::joint: {
      const gae::EdgeSplit split = make_split(config, data.graph, gae::LinkTask::general, out.seed);
      model = train_model(config, data, split.train, out.seed);
      out.n_s = nodes_per_step(config, split.train);
      add_link_metrics(config, model, split, out);
      add_community_metrics(config, data, model, out.seed, out);
      break;
    }
    case Task::ranking: {
      const gae::EdgeSplit split = make_split(config, data.graph, gae::LinkTask::general, out.seed);
      model = train_model(config, data, split.train, out.seed);
      out.n_s = nodes_per_step(config, split.train);
      add_ranking_metrics(config, model, split, out);
      break;
    }
  }
  out.loss_trace = model.loss_trace;
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

SelectionRun selection_run(const RunConfig& config, const Dataset& data, int run) {
  if (config.val_frac <= 0.0) throw InvalidArgument("sweep needs a positive val_frac");
  const std::uint64_t seed = run_seed(config, run);
  const gae::EdgeSplit split = make_split(config, data.graph, gae::LinkTask::general, seed);
  const gae::TrainedModel model = train_model(config, data, split.train, seed);
  SelectionRun out;
  out.val_auc = gae::score_link_pairs(model.embedding, model.spec.decoder, split.val_pos, split.val_neg).auc;
  const gae::Matrix z = model.embedding.leftCols(model.spec.embedding_dim);
  const gae::Partition predicted =
      gae::kmeans(z, cluster_count(config, data), gae::derive_seed(seed, kKMeansStream)).partition;
  out.modularity = gae::modularity(undirected_view(split.train), predicted);
  return out;
}

}  // namespace gaecli
