#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gae/common.hpp"

namespace gae {

struct Edge {
  int src = 0;
  int dst = 0;
  double weight = 1.0;
};

/// Immutable weighted adjacency in CSR form.
///
/// Undirected graphs store both (i,j) and (j,i); m() counts each unordered
/// pair once. Directed graphs store arcs and m() counts arcs. Column indices
/// within a row are sorted ascending.
class SparseGraph {
 public:
  SparseGraph() = default;

  /// Validates and builds a graph. Undirected input is mirrored; a pair given
  /// in both directions must carry equal weights. Rejects duplicates,
  /// self-loops, weights outside [0,1] and ids outside [0,n).
  static SparseGraph from_edges(int n, bool directed, const std::vector<Edge>& edges);

  /// Graph with n nodes and no edges.
  static SparseGraph empty(int n, bool directed = false);

  int n() const { return n_; }
  std::int64_t m() const { return m_; }
  bool directed() const { return directed_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(cols_.size()); }

  std::span<const int> neighbors(int i) const {
    return {cols_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
  }
  std::span<const double> weights(int i) const {
    return {weights_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
  }

  int degree(int i) const { return static_cast<int>(row_ptr_[i + 1] - row_ptr_[i]); }
  double weighted_degree(int i) const;
  double weight(int i, int j) const;
  bool has_edge(int i, int j) const { return weight_index(i, j) >= 0; }

  const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_index() const { return cols_; }
  const std::vector<double>& values() const { return weights_; }

  /// Directed: every arc. Undirected: each pair once with src < dst.
  std::vector<Edge> edges() const;

  /// Undirected view; reciprocal arcs merge with the larger weight.
  SparseGraph symmetrized() const;

  /// Subgraph induced by `nodes`; node k of the result is nodes[k].
  SparseGraph induced(std::span<const int> nodes) const;

  /// Same adjacency plus `extra` isolated nodes appended at the end.
  SparseGraph with_extra_nodes(int extra) const;

  bool operator==(const SparseGraph& other) const = default;

 private:
  std::int64_t weight_index(int i, int j) const;

  int n_ = 0;
  std::int64_t m_ = 0;
  bool directed_ = false;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<int> cols_;
  std::vector<double> weights_;
};

/// Dense node features; row i belongs to node i.
using FeatureMatrix = Matrix;

struct LoadOptions {
  bool directed = false;
  /// Node count when known; otherwise taken from a "# nodes: N" line or 1 + max id.
  std::optional<int> num_nodes;
};

/// Parses "src dst [weight]" records; '#' starts a comment line.
/// Without an explicit node count, ids must cover 0..max without gaps.
SparseGraph load_graph(std::istream& in, const LoadOptions& options);
SparseGraph load_graph_file(const std::string& path, const LoadOptions& options);

/// Writes "# nodes: N" followed by one record per stored edge.
void write_graph(std::ostream& out, const SparseGraph& g);

/// Header "n f" then n rows of f values.
FeatureMatrix load_features(std::istream& in);
FeatureMatrix load_features_file(const std::string& path);
void write_features(std::ostream& out, const FeatureMatrix& x);

/// Node labels as "node<TAB>label" lines; labels are densified in order of first use.
std::vector<int> load_labels(std::istream& in, int n);
std::vector<int> load_labels_file(const std::string& path, int n);

/// Citation dataset in the LINQS layout (".content" rows "id f1..fF label",
/// ".cites" rows "cited citing"). Arcs point from citing to cited paper;
/// duplicate arcs and self-citations are dropped.
struct CitationDataset {
  SparseGraph graph;  // directed
  FeatureMatrix features;
  std::vector<int> labels;
  std::vector<std::string> paper_ids;
  std::vector<std::string> label_names;
  int dropped_records = 0;
};
CitationDataset load_linqs(const std::string& content_path, const std::string& cites_path);

/// Pubmed-Diabetes layout (".NODE.paper.tab" and ".DIRECTED.cites.tab").
CitationDataset load_pubmed_tab(const std::string& node_path, const std::string& cites_path);

}  // namespace gae
