#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "gae/clustering.hpp"

namespace gae {

Partition Partition::from_labels(const std::vector<int>& labels) {
  Partition p;
  p.assignment.resize(labels.size());
  std::map<int, int> ids;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) throw InvalidArgument("partition labels must be non-negative");
    auto [it, inserted] = ids.try_emplace(labels[i], p.k);
    if (inserted) ++p.k;
    p.assignment[i] = it->second;
  }
  return p;
}

Partition Partition::singletons(int n) {
  Partition p;
  p.assignment.resize(static_cast<std::size_t>(n));
  std::iota(p.assignment.begin(), p.assignment.end(), 0);
  p.k = n;
  return p;
}

std::vector<std::vector<int>> Partition::communities() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(k));
  for (int i = 0; i < n(); ++i) out[assignment[i]].push_back(i);
  return out;
}

namespace {

void check_modularity_input(const SparseGraph& g, const char* what) {
  if (g.directed()) throw InvalidArgument(std::string(what) + " requires an undirected graph");
  if (g.m() == 0) throw InvalidArgument(std::string(what) + " is undefined on a graph without edges");
}

void check_partition(const Partition& p, int n) {
  if (p.n() != n) {
    throw InvalidArgument("partition covers " + std::to_string(p.n()) + " nodes, graph has " + std::to_string(n));
  }
  for (int c : p.assignment) {
    if (c < 0 || c >= p.k) throw InvalidArgument("partition ids must lie in [0, K)");
  }
}

// Weighted graph with self-loops used between Louvain levels. self[i] holds
// the diagonal entry, i.e. twice the internal edge weight of the merged block.
struct LevelGraph {
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<double> self;

  int n() const { return static_cast<int>(adj.size()); }
};

LevelGraph level_from(const SparseGraph& g) {
  LevelGraph lg;
  lg.adj.resize(static_cast<std::size_t>(g.n()));
  lg.self.assign(static_cast<std::size_t>(g.n()), 0.0);
  for (int i = 0; i < g.n(); ++i) {
    const auto nb = g.neighbors(i);
    const auto w = g.weights(i);
    for (std::size_t k = 0; k < nb.size(); ++k) lg.adj[i].emplace_back(nb[k], w[k]);
  }
  return lg;
}

// Local moving phase. Returns true when any node changed community.
bool move_nodes(const LevelGraph& lg, std::vector<int>& comm, const std::vector<int>& order, double two_m,
                double min_gain) {
  const int n = lg.n();
  std::vector<double> k(static_cast<std::size_t>(n));
  std::vector<double> tot(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    k[i] = lg.self[i];
    for (const auto& [j, w] : lg.adj[i]) k[i] += w;
    tot[comm[i]] += k[i];
  }
  const double m = two_m / 2.0;
  std::vector<double> link(static_cast<std::size_t>(n), 0.0);
  std::vector<int> touched;
  bool any = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (int i : order) {
      const int current = comm[i];
      touched.clear();
      for (const auto& [j, w] : lg.adj[i]) {
        const int c = comm[j];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += w;
      }
      tot[current] -= k[i];
      const double scale = k[i] / two_m;
      int best = current;
      double best_gain = link[current] - tot[current] * scale;
      for (int c : touched) {
        if (c == current) continue;
        const double gain = link[c] - tot[c] * scale;
        if ((gain - best_gain) / m > min_gain) {
          best = c;
          best_gain = gain;
        }
      }
      tot[best] += k[i];
      for (int c : touched) link[c] = 0.0;
      link[current] = 0.0;
      if (best != current) {
        comm[i] = best;
        moved = true;
        any = true;
      }
    }
  }
  return any;
}

// Densifies community ids in order of first use; returns K.
int densify(std::vector<int>& comm) {
  std::vector<int> remap(comm.size(), -1);
  int k = 0;
  for (int& c : comm) {
    if (remap[c] < 0) remap[c] = k++;
    c = remap[c];
  }
  return k;
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<int>& comm, int k) {
  std::vector<std::map<int, double>> rows(static_cast<std::size_t>(k));
  LevelGraph out;
  out.self.assign(static_cast<std::size_t>(k), 0.0);
  for (int i = 0; i < lg.n(); ++i) {
    const int ci = comm[i];
    out.self[ci] += lg.self[i];
    for (const auto& [j, w] : lg.adj[i]) {
      const int cj = comm[j];
      if (ci == cj) {
        out.self[ci] += w;
      } else {
        rows[ci][cj] += w;
      }
    }
  }
  out.adj.resize(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) out.adj[c].assign(rows[c].begin(), rows[c].end());
  return out;
}

}  // namespace

double modularity(const SparseGraph& g, const Partition& partition) {
  check_modularity_input(g, "modularity");
  check_partition(partition, g.n());
  std::vector<double> internal(static_cast<std::size_t>(partition.k), 0.0);
  std::vector<double> tot(static_cast<std::size_t>(partition.k), 0.0);
  double two_m = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    const int ci = partition.assignment[i];
    const auto nb = g.neighbors(i);
    const auto w = g.weights(i);
    for (std::size_t e = 0; e < nb.size(); ++e) {
      if (partition.assignment[nb[e]] == ci) internal[ci] += w[e];
      tot[ci] += w[e];
      two_m += w[e];
    }
  }
  if (!(two_m > 0.0)) throw InvalidArgument("modularity is undefined when every edge weight is zero");
  double q = 0.0;
  for (int c = 0; c < partition.k; ++c) q += internal[c] / two_m - (tot[c] / two_m) * (tot[c] / two_m);
  return q;
}

std::vector<Partition> louvain(const SparseGraph& g, const LouvainOptions& options) {
  check_modularity_input(g, "louvain");
  LevelGraph lg = level_from(g);
  double two_m = 0.0;
  for (int i = 0; i < g.n(); ++i) two_m += g.weighted_degree(i);
  if (!(two_m > 0.0)) throw InvalidArgument("louvain is undefined when every edge weight is zero");

  std::vector<int> node_comm(static_cast<std::size_t>(g.n()));
  std::iota(node_comm.begin(), node_comm.end(), 0);
  Rng rng(options.shuffle_seed.value_or(0));
  std::vector<Partition> levels;
  while (true) {
    std::vector<int> order(static_cast<std::size_t>(lg.n()));
    std::iota(order.begin(), order.end(), 0);
    if (options.shuffle_seed) std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> comm(order.size());
    std::iota(comm.begin(), comm.end(), 0);
    const bool changed = move_nodes(lg, comm, order, two_m, options.min_gain);
    if (!changed) break;
    const int k = densify(comm);
    for (int& c : node_comm) c = comm[c];
    Partition p;
    p.assignment = node_comm;
    p.k = k;
    levels.push_back(p);
    if (k == lg.n()) break;
    lg = aggregate(lg, comm, k);
  }
  if (levels.empty()) levels.push_back(Partition::singletons(g.n()));
  return levels;
}

MembershipOperators membership_operators(const Partition& partition, int s, double lambda_enc, std::uint64_t seed) {
  if (s < 1) throw InvalidArgument("membership operators need s >= 1");
  check_partition(partition, partition.n());
  const int n = partition.n();
  const auto communities = partition.communities();
  std::vector<Edge> complete;
  std::set<std::pair<int, int>> sparse;
  Rng rng(seed);
  for (const auto& members : communities) {
    const auto size = static_cast<int>(members.size());
    for (int a = 0; a < size; ++a) {
      for (int b = a + 1; b < size; ++b) complete.push_back({members[a], members[b], 1.0});
    }
    const int draws = std::min(s, size - 1);
    std::vector<int> pool;
    for (int a = 0; a < size; ++a) {
      pool.clear();
      for (int b = 0; b < size; ++b) {
        if (b != a) pool.push_back(members[b]);
      }
      for (int t = 0; t < draws; ++t) {
        std::uniform_int_distribution<int> pick(t, static_cast<int>(pool.size()) - 1);
        std::swap(pool[t], pool[pick(rng)]);
        const int u = members[a];
        const int v = pool[t];
        sparse.emplace(std::min(u, v), std::max(u, v));
      }
    }
  }
  std::vector<Edge> sparse_edges;
  sparse_edges.reserve(sparse.size());
  for (const auto& [u, v] : sparse) sparse_edges.push_back({u, v, 1.0});
  MembershipOperators ops;
  ops.a_c = SparseGraph::from_edges(n, false, complete);
  ops.a_s = SparseGraph::from_edges(n, false, sparse_edges);
  ops.s = s;
  ops.lambda_enc = lambda_enc;
  return ops;
}

double indicator_eigencheck(const Operator& op, const Partition& partition) {
  check_partition(partition, op.n());
  double worst = 0.0;
  for (int c = 0; c < partition.k; ++c) {
    Vector v = Vector::Zero(op.n());
    for (int i = 0; i < op.n(); ++i) {
      if (partition.assignment[i] == c) v[i] = 1.0;
    }
    const Vector fv = op.matrix * v;
    worst = std::max(worst, (fv - v).cwiseAbs().maxCoeff());
  }
  return worst;
}

void write_partition(std::ostream& out, const Partition& partition) {
  for (int i = 0; i < partition.n(); ++i) out << i << '\t' << partition.assignment[i] << '\n';
}

Partition read_partition(std::istream& in) {
  std::vector<int> labels;
  std::vector<char> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    long long node = 0;
    long long label = 0;
    if (!(row >> node >> label) || node < 0 || label < 0) {
      throw InvalidArgument("partition line " + std::to_string(line_no) + ": expected 'node<TAB>community'");
    }
    const auto idx = static_cast<std::size_t>(node);
    if (idx >= labels.size()) {
      labels.resize(idx + 1, 0);
      seen.resize(idx + 1, 0);
    }
    if (seen[idx]) throw InvalidArgument("partition line " + std::to_string(line_no) + ": node listed twice");
    seen[idx] = 1;
    labels[idx] = static_cast<int>(label);
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw InvalidArgument("partition: node " + std::to_string(i) + " is not assigned");
  }
  return Partition::from_labels(labels);
}

}  // namespace gae
