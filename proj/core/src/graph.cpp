#include "gae/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace gae {
namespace {

std::string pair_text(int i, int j) {
  std::ostringstream os;
  os << "(" << i << ", " << j << ")";
  return os.str();
}

struct Entry {
  int row;
  int col;
  double weight;
};

}  // namespace

SparseGraph SparseGraph::from_edges(int n, bool directed, const std::vector<Edge>& edges) {
  if (n < 0) throw InvalidArgument("node count must be non-negative");
  for (const Edge& e : edges) {
    if (e.src < 0 || e.dst < 0 || e.src >= n || e.dst >= n) {
      throw InvalidArgument("edge " + pair_text(e.src, e.dst) + " references a node outside [0, " +
                            std::to_string(n) + ")");
    }
    if (e.src == e.dst) throw InvalidArgument("self-loop " + pair_text(e.src, e.dst) + " is not allowed");
    if (!(e.weight >= 0.0 && e.weight <= 1.0)) {
      throw InvalidArgument("weight-out-of-range: edge " + pair_text(e.src, e.dst) + " has weight " +
                            format_double(e.weight) + ", expected [0, 1]");
    }
  }

  std::vector<Entry> ordered;
  ordered.reserve(edges.size());
  for (const Edge& e : edges) ordered.push_back({e.src, e.dst, e.weight});
  std::sort(ordered.begin(), ordered.end(),
            [](const Entry& a, const Entry& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
  for (std::size_t k = 1; k < ordered.size(); ++k) {
    if (ordered[k].row == ordered[k - 1].row && ordered[k].col == ordered[k - 1].col) {
      throw InvalidArgument("duplicate edge " + pair_text(ordered[k].row, ordered[k].col));
    }
  }

  SparseGraph g;
  g.n_ = n;
  g.directed_ = directed;

  std::vector<Entry> entries;
  if (directed) {
    entries = std::move(ordered);
    g.m_ = static_cast<std::int64_t>(entries.size());
  } else {
    std::vector<Entry> canon;
    canon.reserve(ordered.size());
    for (const Entry& e : ordered) {
      canon.push_back({std::min(e.row, e.col), std::max(e.row, e.col), e.weight});
    }
    std::stable_sort(canon.begin(), canon.end(),
                     [](const Entry& a, const Entry& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
    entries.reserve(2 * canon.size());
    for (std::size_t k = 0; k < canon.size(); ++k) {
      if (k > 0 && canon[k].row == canon[k - 1].row && canon[k].col == canon[k - 1].col) {
        if (canon[k].weight != canon[k - 1].weight) {
          throw InvalidArgument("edge " + pair_text(canon[k].row, canon[k].col) +
                                " is given in both directions with different weights");
        }
        continue;
      }
      entries.push_back(canon[k]);
      entries.push_back({canon[k].col, canon[k].row, canon[k].weight});
      ++g.m_;
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
  }

  g.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  g.cols_.reserve(entries.size());
  g.weights_.reserve(entries.size());
  for (const Entry& e : entries) {
    ++g.row_ptr_[static_cast<std::size_t>(e.row) + 1];
    g.cols_.push_back(e.col);
    g.weights_.push_back(e.weight);
  }
  for (int i = 0; i < n; ++i) g.row_ptr_[i + 1] += g.row_ptr_[i];
  return g;
}

SparseGraph SparseGraph::empty(int n, bool directed) { return from_edges(n, directed, {}); }

double SparseGraph::weighted_degree(int i) const {
  double s = 0.0;
  for (double w : weights(i)) s += w;
  return s;
}

std::int64_t SparseGraph::weight_index(int i, int j) const {
  auto row = neighbors(i);
  auto it = std::lower_bound(row.begin(), row.end(), j);
  if (it == row.end() || *it != j) return -1;
  return row_ptr_[i] + (it - row.begin());
}

double SparseGraph::weight(int i, int j) const {
  const std::int64_t k = weight_index(i, j);
  return k < 0 ? 0.0 : weights_[static_cast<std::size_t>(k)];
}

std::vector<Edge> SparseGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(m_));
  for (int i = 0; i < n_; ++i) {
    auto nb = neighbors(i);
    auto w = weights(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (directed_ || i < nb[k]) out.push_back({i, nb[k], w[k]});
    }
  }
  return out;
}

SparseGraph SparseGraph::symmetrized() const {
  if (!directed_) return *this;
  std::vector<Edge> und;
  und.reserve(static_cast<std::size_t>(m_));
  for (int i = 0; i < n_; ++i) {
    auto nb = neighbors(i);
    auto w = weights(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const int j = nb[k];
      const double back = weight(j, i);
      const bool reciprocal = has_edge(j, i);
      if (!reciprocal) {
        und.push_back({i, j, w[k]});
      } else if (i < j) {
        und.push_back({i, j, std::max(w[k], back)});
      }
    }
  }
  return from_edges(n_, false, und);
}

SparseGraph SparseGraph::induced(std::span<const int> nodes) const {
  std::vector<int> local(static_cast<std::size_t>(n_), -1);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const int v = nodes[k];
    if (v < 0 || v >= n_) throw InvalidArgument("induced: node id out of range");
    if (local[v] >= 0) throw InvalidArgument("induced: node " + std::to_string(v) + " listed twice");
    local[v] = static_cast<int>(k);
  }
  SparseGraph g;
  g.n_ = static_cast<int>(nodes.size());
  g.directed_ = directed_;
  g.row_ptr_.assign(nodes.size() + 1, 0);
  std::vector<std::pair<int, double>> row;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    row.clear();
    auto nb = neighbors(nodes[k]);
    auto w = weights(nodes[k]);
    for (std::size_t e = 0; e < nb.size(); ++e) {
      if (local[nb[e]] >= 0) row.emplace_back(local[nb[e]], w[e]);
    }
    std::sort(row.begin(), row.end());
    for (const auto& [c, wt] : row) {
      g.cols_.push_back(c);
      g.weights_.push_back(wt);
    }
    g.row_ptr_[k + 1] = static_cast<std::int64_t>(g.cols_.size());
  }
  g.m_ = directed_ ? g.nnz() : g.nnz() / 2;
  return g;
}

SparseGraph SparseGraph::with_extra_nodes(int extra) const {
  if (extra < 0) throw InvalidArgument("with_extra_nodes: negative count");
  SparseGraph g = *this;
  g.n_ += extra;
  g.row_ptr_.resize(static_cast<std::size_t>(g.n_) + 1, g.row_ptr_.back());
  return g;
}

}  // namespace gae
