#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "artifacts.hpp"
#include "config.hpp"
#include "gae/degeneracy.hpp"
#include "gae/eval.hpp"
#include "gae/retrofit.hpp"
#include "gae/sampling.hpp"
#include "pipeline.hpp"

namespace gaecli {
namespace {

namespace fs = std::filesystem;
using gae::InvalidArgument;
using gae::format_double;

fs::path default_output_dir() {
  const char* env = std::getenv("GAE_OUTPUT_DIR");
  return env != nullptr && *env != '\0' ? fs::path(env) : fs::current_path();
}

fs::path output_path(const std::string& given, const std::string& fallback) {
  return given.empty() ? default_output_dir() / fallback : fs::path(given);
}

gae::SparseGraph load_input_graph(const GraphArgs& args) {
  if (args.graph.empty()) throw InvalidArgument("--graph is required");
  gae::LoadOptions opts;
  opts.directed = args.directed;
  return gae::load_graph_file(args.graph, opts);
}

std::pair<ConfigValues, RunConfig> load_run_config(const ConfigArgs& args) {
  ConfigValues values = merge_config(args.config, args.overrides);
  RunConfig config = build_run_config(values);
  return {std::move(values), std::move(config)};
}

gae::Matrix read_embeddings(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    long long node = 0;
    if (!(fields >> node) || node != static_cast<long long>(rows.size())) {
      throw InvalidArgument(path + ": expected row " + std::to_string(rows.size()) + " next");
    }
    std::vector<double> row;
    double v = 0.0;
    while (fields >> v) row.push_back(v);
    if (!fields.eof()) throw InvalidArgument(path + ": bad value in row " + std::to_string(node));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidArgument(path + ": ragged row " + std::to_string(node));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) throw InvalidArgument(path + ": no embeddings");
  gae::Matrix z(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = rows[i][j];
  }
  return z;
}

void print_artifacts(const std::vector<fs::path>& paths) {
  for (const fs::path& p : paths) std::cout << "  wrote " << p.string() << '\n';
}

/// Cartesian product of the grid in a fixed parameter order; the last parameter varies fastest.
std::vector<std::vector<std::pair<std::string, std::string>>> grid_candidates(const RunConfig& config) {
  std::vector<std::vector<std::pair<std::string, std::string>>> out{{}};
  for (const auto& [param, values] : config.grid) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto& partial : out) {
      for (const std::string& v : values) {
        auto c = partial;
        c.emplace_back(param, v);
        next.push_back(std::move(c));
      }
    }
    out = std::move(next);
  }
  return out;
}

/// Runs `count` independent jobs on up to `jobs` threads; rethrows the first failure.
template <typename Fn>
void parallel_for(int count, int jobs, Fn fn) {
  const int workers = std::max(1, std::min(jobs, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

int cmd_prepare(const PrepareArgs& args) {
  if (args.input.empty()) throw InvalidArgument("--input is required");
  const fs::path dir = output_path(args.out, "prepared");
  ArtifactSet artifacts(dir);
  if (args.format == "edgelist") {
    gae::LoadOptions opts;
    opts.directed = args.directed;
    gae::SparseGraph g = gae::load_graph_file(args.input, opts);
    if (args.symmetrize) g = g.symmetrized();
    artifacts.stage("graph.txt", [&](std::ostream& out) { gae::write_graph(out, g); });
    std::cout << "graph: " << g.n() << " nodes, " << g.m() << (g.directed() ? " arcs" : " edges") << '\n';
  } else if (args.format == "linqs" || args.format == "pubmed") {
    if (args.cites.empty()) throw InvalidArgument("--cites is required for " + args.format);
    const gae::CitationDataset data = args.format == "linqs" ? gae::load_linqs(args.input, args.cites)
                                                             : gae::load_pubmed_tab(args.input, args.cites);
    const gae::SparseGraph g = args.symmetrize ? data.graph.symmetrized() : data.graph;
    artifacts.stage("graph.txt", [&](std::ostream& out) { gae::write_graph(out, g); });
    artifacts.stage("features.txt", [&](std::ostream& out) { gae::write_features(out, data.features); });
    artifacts.stage("labels.tsv", [&](std::ostream& out) {
      for (std::size_t i = 0; i < data.labels.size(); ++i) {
        out << i << '\t' << data.label_names[data.labels[i]] << '\n';
      }
    });
    artifacts.stage("ids.tsv", [&](std::ostream& out) {
      for (std::size_t i = 0; i < data.paper_ids.size(); ++i) out << i << '\t' << data.paper_ids[i] << '\n';
    });
    std::cout << args.format << ": " << g.n() << " nodes, " << g.m() << (g.directed() ? " arcs" : " edges") << ", "
              << data.features.cols() << " features, " << data.label_names.size() << " classes, "
              << data.dropped_records << " records dropped\n";
  } else {
    throw InvalidArgument("unknown format '" + args.format + "' (expected edgelist, linqs or pubmed)");
  }
  print_artifacts(artifacts.commit());
  return 0;
}

int cmd_kcore(const KCoreArgs& args) {
  const gae::SparseGraph g = load_input_graph(args.input);
  const gae::CoreDecomposition cores = gae::core_decomposition(g);
  const gae::InducedSubgraph core = gae::extract_k_core(g, cores, args.k);
  ArtifactSet artifacts(default_output_dir());
  artifacts.stage(fs::absolute(output_path(args.out, "kcore_nodes.tsv")).string(), [&](std::ostream& out) {
    for (std::size_t i = 0; i < core.nodes.size(); ++i) out << i << '\t' << core.nodes[i] << '\n';
  });
  if (!args.graph_out.empty()) {
    artifacts.stage(fs::absolute(args.graph_out).string(), [&](std::ostream& out) { gae::write_graph(out, core.graph); });
  }
  std::cout << "degeneracy " << cores.degeneracy << "; " << args.k << "-core has " << core.graph.n() << " of "
            << g.n() << " nodes and " << core.graph.m() << (g.directed() ? " arcs" : " edges") << '\n';
  print_artifacts(artifacts.commit());
  return 0;
}

int cmd_sample(const SampleArgs& args) {
  const gae::SparseGraph g = load_input_graph(args.input);
  const gae::ImportanceMethod method = gae::parse_importance_method(args.method);
  const std::vector<double> p = gae::sampling_distribution(gae::importance_scores(g, method), args.alpha);
  const int size = args.size > 0 ? args.size : gae::recommended_subgraph_size(g.n(), gae::ThresholdParams{});
  const gae::NodeSample sample = gae::sample_subgraph(g, p, size, args.with_replacement, args.seed);
  const fs::path path = write_atomic(output_path(args.out, "sample_nodes.txt"), [&](std::ostream& out) {
    for (int v : sample.nodes) out << v << '\n';
  });
  std::cout << "sampled " << sample.nodes.size() << " of " << g.n() << " nodes (" << args.method
            << ", alpha " << args.alpha << ", seed " << args.seed << "); induced subgraph has " << sample.graph.m()
            << (g.directed() ? " arcs" : " edges") << '\n';
  print_artifacts({path});
  return 0;
}

int cmd_train(const ConfigArgs& args) {
  const auto [values, config] = load_run_config(args);
  const Dataset data = load_dataset(config.data);
  const gae::TrainedModel model = train_model(config, data, data.graph, config.seed);

  ArtifactSet artifacts(config.output_dir);
  artifacts.stage("model.ckpt", [&](std::ostream& out) { gae::save_checkpoint(out, model); });
  artifacts.stage("embeddings.tsv", [&](std::ostream& out) { write_embeddings(out, model.embedding); });
  artifacts.stage("loss.csv", [&](std::ostream& out) {
    out << "epoch,loss\n";
    for (std::size_t e = 0; e < model.loss_trace.size(); ++e) {
      out << e + 1 << ',' << format_double(model.loss_trace[e]) << '\n';
    }
  });
  std::cout << "trained " << (config.spec.variational ? "VGAE" : "GAE") << " (" << gae::to_string(config.spec.encoder)
            << " encoder, " << gae::to_string(config.spec.decoder.kind) << " decoder, "
            << gae::to_string(config.train.scaling.kind) << " scaling) on " << data.graph.n() << " nodes, "
            << config.train.epochs << " epochs, seed " << config.seed << "; final loss "
            << (model.loss_trace.empty() ? 0.0 : model.loss_trace.back()) << '\n';
  print_artifacts(artifacts.commit());
  return 0;
}

int cmd_evaluate(const ConfigArgs& args) {
  const auto [values, config] = load_run_config(args);
  const Dataset data = load_dataset(config.data);
  check_task_inputs(config, data);

  std::vector<RunResult> results;
  for (int r = 0; r < config.runs; ++r) {
    results.push_back(evaluate_run(config, data, r));
    std::cout << "run " << r << " (seed " << results.back().seed << ")";
    for (const auto& [metric, value] : results.back().metrics) std::cout << "  " << metric << " " << value;
    std::cout << "  " << results.back().seconds << " s\n";
  }

  nlohmann::ordered_json json;
  json["task"] = to_string(config.task);
  json["seed_base"] = config.seed;
  json["scaling"] = gae::to_string(config.train.scaling.kind);
  json["epochs"] = config.train.epochs;
  json["runs"] = nlohmann::ordered_json::array();
  for (const RunResult& r : results) {
    nlohmann::ordered_json run;
    run["run"] = r.run;
    run["seed"] = r.seed;
    run["n_s"] = r.n_s;
    run["seconds"] = r.seconds;
    run["metrics"] = r.metrics;
    json["runs"].push_back(run);
  }
  nlohmann::ordered_json aggregate;
  for (const std::string& metric : config.metrics) {
    std::vector<double> v;
    for (const RunResult& r : results) v.push_back(r.metrics.at(metric));
    const gae::Summary s = gae::summarize(v);
    aggregate[metric] = {{"mean", s.mean}, {"std", s.std}, {"runs", s.runs}};
    std::cout << metric << ": mean " << s.mean << ", std " << s.std << " over " << s.runs << " runs\n";
  }
  json["aggregate"] = aggregate;

  ArtifactSet artifacts(config.output_dir);
  artifacts.stage("metrics.json", [&](std::ostream& out) { out << json.dump(2) << '\n'; });
  artifacts.stage("metrics.csv", [&](std::ostream& out) {
    out << "run,seed,epochs,n_s,metric,value\n";
    for (const RunResult& r : results) {
      for (const std::string& metric : config.metrics) {
        out << r.run << ',' << r.seed << ',' << config.train.epochs << ',' << r.n_s << ',' << metric << ','
            << format_double(r.metrics.at(metric)) << '\n';
      }
    }
  });
  artifacts.stage("curves.csv", [&](std::ostream& out) {
    out << "run,epoch,loss\n";
    for (const RunResult& r : results) {
      for (std::size_t e = 0; e < r.loss_trace.size(); ++e) {
        out << r.run << ',' << e + 1 << ',' << format_double(r.loss_trace[e]) << '\n';
      }
    }
  });
  print_artifacts(artifacts.commit());
  return 0;
}

int cmd_sweep(const SweepArgs& args) {
  if (args.jobs < 1) throw InvalidArgument("--jobs must be positive");
  const auto [values, base] = load_run_config(args.config);
  if (base.grid.empty()) throw InvalidArgument("sweep: empty grid (set at least one grid.* key)");
  const Dataset data = load_dataset(base.data);

  const auto candidates = grid_candidates(base);
  std::vector<RunConfig> configs;
  std::vector<ConfigValues> candidate_values;
  for (const auto& candidate : candidates) {
    ConfigValues v = values;
    for (const auto& [param, value] : candidate) {
      v[param] = value;
      v["grid." + param] = "";
    }
    configs.push_back(build_run_config(v));
    candidate_values.push_back(std::move(v));
  }

  const int total = static_cast<int>(configs.size()) * base.runs;
  std::vector<SelectionRun> runs(static_cast<std::size_t>(total));
  parallel_for(total, args.jobs, [&](int i) {
    runs[i] = selection_run(configs[i / base.runs], data, i % base.runs);
  });

  std::vector<gae::SelectionCandidate> scored;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    gae::SelectionCandidate s;
    for (int r = 0; r < base.runs; ++r) {
      s.val_auc += runs[c * base.runs + r].val_auc / base.runs;
      s.modularity += runs[c * base.runs + r].modularity / base.runs;
    }
    scored.push_back(s);
  }
  const std::size_t best = gae::select_hyperparameters(scored);

  std::vector<std::size_t> order(configs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto score = [&](std::size_t i) { return (scored[i].val_auc + scored[i].modularity) / 2.0; };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score(a) > score(b); });

  ArtifactSet artifacts(base.output_dir);
  artifacts.stage("leaderboard.csv", [&](std::ostream& out) {
    out << "rank,candidate";
    for (const auto& [param, value] : candidates.front()) out << ',' << param;
    out << ",val_auc,modularity,score\n";
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      const std::size_t c = order[rank];
      out << rank + 1 << ',' << c;
      for (const auto& [param, value] : candidates[c]) out << ',' << value;
      out << ',' << format_double(scored[c].val_auc) << ',' << format_double(scored[c].modularity) << ','
          << format_double(score(c)) << '\n';
    }
  });
  artifacts.stage("best.conf", [&](std::ostream& out) {
    out << "# best of " << candidates.size() << " candidates, " << base.runs << " runs each, seed base " << base.seed
        << '\n'
        << format_config(candidate_values[best]);
  });

  std::cout << "evaluated " << candidates.size() << " candidates x " << base.runs << " runs\nbest:";
  for (const auto& [param, value] : candidates[best]) std::cout << ' ' << param << '=' << value;
  std::cout << " (val AUC " << scored[best].val_auc << ", Q " << scored[best].modularity << ")\n";
  print_artifacts(artifacts.commit());
  return 0;
}

int cmd_cluster(const ClusterArgs& args) {
  std::optional<gae::SparseGraph> g;
  if (!args.input.graph.empty()) g = load_input_graph(args.input);
  gae::Partition partition;
  if (args.method == "louvain") {
    if (!g) throw InvalidArgument("louvain clustering needs --graph");
    const std::vector<gae::Partition> levels = gae::louvain(g->directed() ? g->symmetrized() : *g);
    const int count = static_cast<int>(levels.size());
    if (args.level < -count || args.level >= count) {
      throw InvalidArgument("--level must lie in [" + std::to_string(-count) + ", " + std::to_string(count - 1) + "]");
    }
    partition = levels[args.level < 0 ? count + args.level : args.level];
  } else if (args.method == "kmeans") {
    if (args.embeddings.empty() || args.k < 1) throw InvalidArgument("kmeans clustering needs --embeddings and --k");
    partition = gae::kmeans(read_embeddings(args.embeddings), args.k, args.seed).partition;
    if (g && g->n() != partition.n()) throw InvalidArgument("embeddings and graph disagree on the node count");
  } else {
    throw InvalidArgument("unknown clustering method '" + args.method + "' (expected louvain or kmeans)");
  }

  const fs::path path = write_atomic(output_path(args.out, "partition.tsv"),
                                     [&](std::ostream& out) { gae::write_partition(out, partition); });
  std::cout << args.method << ": " << partition.k << " communities over " << partition.n() << " nodes";
  if (g) std::cout << ", modularity " << gae::modularity(g->directed() ? g->symmetrized() : *g, partition);
  if (!args.labels.empty()) {
    const gae::Partition truth = gae::Partition::from_labels(gae::load_labels_file(args.labels, partition.n()));
    std::cout << ", AMI " << gae::ami(partition, truth) << ", ARI " << gae::ari(partition, truth);
  }
  std::cout << '\n';
  print_artifacts({path});
  return 0;
}

int cmd_rank(const RankArgs& args) {
  std::istringstream in(read_text_file(args.checkpoint));
  const gae::TrainedModel model = gae::load_checkpoint(in);
  std::vector<int> queries = args.queries;
  if (queries.empty()) {
    for (int i = 0; i < model.num_nodes; ++i) queries.push_back(i);
  }
  const auto ranked = gae::rank_neighbors(model, queries, args.k);
  const fs::path path = write_atomic(output_path(args.out, "ranking.tsv"), [&](std::ostream& out) {
    out << "query\trank\tnode\tscore\n";
    for (std::size_t q = 0; q < queries.size(); ++q) {
      for (std::size_t r = 0; r < ranked[q].size(); ++r) {
        out << queries[q] << '\t' << r + 1 << '\t' << ranked[q][r].node << '\t' << format_double(ranked[q][r].score)
            << '\n';
      }
    }
  });
  std::cout << "ranked top " << args.k << " candidates for " << queries.size() << " queries\n";
  print_artifacts({path});
  return 0;
}

int cmd_retrofit(const RetrofitArgs& args) {
  std::istringstream vectors(read_text_file(args.vectors));
  std::istringstream edges(read_text_file(args.edges));
  const gae::ConceptSpace space = gae::load_concept_space(vectors, edges);
  gae::RetrofitOptions opts;
  opts.max_iters = args.max_iters;
  opts.tol = args.tol;
  if (args.order == "jacobi") {
    opts.order = gae::UpdateOrder::jacobi;
  } else if (args.order == "gauss_seidel") {
    opts.order = gae::UpdateOrder::gauss_seidel;
  } else {
    throw InvalidArgument("unknown update order '" + args.order + "' (expected jacobi or gauss_seidel)");
  }
  const gae::RetrofitResult result = gae::retrofit(space, opts);
  const fs::path path = write_atomic(output_path(args.out, "retrofitted.tsv"), [&](std::ostream& out) {
    for (int i = 0; i < space.n(); ++i) {
      out << space.concepts[i] << '\t';
      for (Eigen::Index j = 0; j < result.q.cols(); ++j) out << (j > 0 ? " " : "") << format_double(result.q(i, j));
      out << '\n';
    }
  });
  const int unknown = static_cast<int>(std::count(space.known.begin(), space.known.end(), 0));
  std::cout << "retrofitted " << space.n() << " concepts (" << unknown << " without initial vectors) over "
            << space.relations.size() << " relations in " << result.iterations << " sweeps; final loss "
            << (result.loss_trace.empty() ? gae::retrofit_loss(space, result.q) : result.loss_trace.back()) << '\n';
  if (!result.converged) std::cerr << "warning: did not reach tol " << args.tol << " within " << args.max_iters << " sweeps\n";
  print_artifacts({path});
  return 0;
}

}  // namespace gaecli
