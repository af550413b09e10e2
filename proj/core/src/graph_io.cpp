#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "gae/graph.hpp"

namespace gae {
namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_char(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

long long parse_node_id(const std::string& tok, std::size_t line_no) {
  long long v = 0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || v < 0 || v > 2147483646LL) {
    throw InvalidArgument("line " + std::to_string(line_no) + ": invalid node id '" + tok + "'");
  }
  return v;
}

double parse_double(const std::string& tok, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument(where + ": invalid number '" + tok + "'");
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return in;
}

}  // namespace

SparseGraph load_graph(std::istream& in, const LoadOptions& options) {
  std::vector<Edge> edges;
  std::optional<int> declared = options.num_nodes;
  std::string line;
  std::size_t line_no = 0;
  long long max_id = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string body = trim(t.substr(1));
      if (!options.num_nodes && body.rfind("nodes:", 0) == 0) {
        declared = static_cast<int>(parse_node_id(trim(body.substr(6)), line_no));
      }
      continue;
    }
    const auto tok = split_ws(t);
    if (tok.size() != 2 && tok.size() != 3) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": expected 'src dst [weight]'");
    }
    Edge e;
    e.src = static_cast<int>(parse_node_id(tok[0], line_no));
    e.dst = static_cast<int>(parse_node_id(tok[1], line_no));
    if (tok.size() == 3) e.weight = parse_double(tok[2], "line " + std::to_string(line_no));
    max_id = std::max<long long>(max_id, std::max(e.src, e.dst));
    edges.push_back(e);
  }

  int n = 0;
  if (declared) {
    n = *declared;
    if (max_id >= n) {
      throw InvalidArgument("node id " + std::to_string(max_id) + " exceeds declared node count " +
                            std::to_string(n));
    }
  } else {
    n = static_cast<int>(max_id + 1);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (const Edge& e : edges) seen[e.src] = seen[e.dst] = 1;
    for (int i = 0; i < n; ++i) {
      if (!seen[i]) {
        throw InvalidArgument("node id gap: id " + std::to_string(i) +
                              " never appears (declare '# nodes: N' to allow isolated nodes)");
      }
    }
  }
  return SparseGraph::from_edges(n, options.directed, edges);
}

SparseGraph load_graph_file(const std::string& path, const LoadOptions& options) {
  auto in = open_input(path);
  return load_graph(in, options);
}

void write_graph(std::ostream& out, const SparseGraph& g) {
  out << "# nodes: " << g.n() << "\n";
  for (const Edge& e : g.edges()) {
    out << e.src << ' ' << e.dst << ' ' << format_double(e.weight) << '\n';
  }
}

FeatureMatrix load_features(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    header = split_ws(t);
  }
  if (header.size() != 2) throw InvalidArgument("features: expected header 'n f'");
  const long long n = parse_node_id(header[0], line_no);
  const long long f = parse_node_id(header[1], line_no);
  FeatureMatrix x(n, f);
  long long row = 0;
  while (row < n && std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto tok = split_ws(t);
    if (static_cast<long long>(tok.size()) != f) {
      throw InvalidArgument("features line " + std::to_string(line_no) + ": expected " + std::to_string(f) +
                            " values, found " + std::to_string(tok.size()));
    }
    for (long long c = 0; c < f; ++c) {
      const double v = parse_double(tok[c], "features line " + std::to_string(line_no));
      if (!std::isfinite(v)) throw InvalidArgument("features line " + std::to_string(line_no) + ": non-finite value");
      x(row, c) = v;
    }
    ++row;
  }
  if (row != n) throw InvalidArgument("features: expected " + std::to_string(n) + " rows, found " + std::to_string(row));
  return x;
}

FeatureMatrix load_features_file(const std::string& path) {
  auto in = open_input(path);
  return load_features(in);
}

void write_features(std::ostream& out, const FeatureMatrix& x) {
  out << x.rows() << ' ' << x.cols() << '\n';
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(x(i, j));
    }
    out << '\n';
  }
}

std::vector<int> load_labels(std::istream& in, int n) {
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::map<std::string, int> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto tok = split_ws(t);
    if (tok.size() != 2) throw InvalidArgument("labels line " + std::to_string(line_no) + ": expected 'node label'");
    const long long node = parse_node_id(tok[0], line_no);
    if (node >= n) throw InvalidArgument("labels line " + std::to_string(line_no) + ": node out of range");
    auto [it, inserted] = ids.try_emplace(tok[1], static_cast<int>(ids.size()));
    if (labels[node] >= 0) throw InvalidArgument("labels: node " + std::to_string(node) + " labelled twice");
    labels[node] = it->second;
  }
  for (int i = 0; i < n; ++i) {
    if (labels[i] < 0) throw InvalidArgument("labels: node " + std::to_string(i) + " has no label");
  }
  return labels;
}

std::vector<int> load_labels_file(const std::string& path, int n) {
  auto in = open_input(path);
  return load_labels(in, n);
}

namespace {

CitationDataset assemble(std::vector<std::string> ids, std::vector<std::vector<double>> feats,
                         std::vector<std::string> label_text, const std::vector<std::pair<std::string, std::string>>& arcs,
                         std::size_t f) {
  CitationDataset ds;
  const int n = static_cast<int>(ids.size());
  std::unordered_map<std::string, int> index;
  for (int i = 0; i < n; ++i) index.emplace(ids[i], i);

  std::map<std::string, int> label_ids;
  for (const auto& l : label_text) label_ids.try_emplace(l, 0);
  int next = 0;
  for (auto& [name, id] : label_ids) {
    id = next++;
    ds.label_names.push_back(name);
  }
  ds.labels.reserve(label_text.size());
  for (const auto& l : label_text) ds.labels.push_back(label_ids[l]);

  ds.features = FeatureMatrix::Zero(n, static_cast<Eigen::Index>(f));
  for (int i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < f; ++c) ds.features(i, static_cast<Eigen::Index>(c)) = feats[i][c];
  }

  std::set<std::pair<int, int>> seen;
  std::vector<Edge> edges;
  for (const auto& [src, dst] : arcs) {
    auto a = index.find(src);
    auto b = index.find(dst);
    if (a == index.end() || b == index.end() || a->second == b->second ||
        !seen.emplace(a->second, b->second).second) {
      ++ds.dropped_records;
      continue;
    }
    edges.push_back({a->second, b->second, 1.0});
  }
  ds.graph = SparseGraph::from_edges(n, true, edges);
  ds.paper_ids = std::move(ids);
  return ds;
}

}  // namespace

CitationDataset load_linqs(const std::string& content_path, const std::string& cites_path) {
  auto content = open_input(content_path);
  std::vector<std::string> ids;
  std::vector<std::vector<double>> feats;
  std::vector<std::string> labels;
  std::string line;
  std::size_t f = 0;
  while (std::getline(content, line)) {
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() < 2) throw InvalidArgument("content: malformed row for '" + tok[0] + "'");
    if (f == 0) f = tok.size() - 2;
    if (tok.size() - 2 != f) throw InvalidArgument("content: inconsistent feature count for '" + tok[0] + "'");
    ids.push_back(tok[0]);
    std::vector<double> row(f);
    for (std::size_t c = 0; c < f; ++c) row[c] = parse_double(tok[c + 1], "content");
    feats.push_back(std::move(row));
    labels.push_back(tok.back());
  }
  auto cites = open_input(cites_path);
  std::vector<std::pair<std::string, std::string>> arcs;
  while (std::getline(cites, line)) {
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != 2) throw InvalidArgument("cites: expected 'cited citing'");
    arcs.emplace_back(tok[1], tok[0]);
  }
  return assemble(std::move(ids), std::move(feats), std::move(labels), arcs, f);
}

CitationDataset load_pubmed_tab(const std::string& node_path, const std::string& cites_path) {
  auto nodes = open_input(node_path);
  std::string line;
  std::getline(nodes, line);  // "NODE paper"
  std::getline(nodes, line);  // feature declarations
  std::vector<std::string> vocab;
  for (const auto& field : split_char(line, '\t')) {
    const auto parts = split_char(field, ':');
    if (parts.size() >= 2 && parts[0] == "numeric") vocab.push_back(parts[1]);
  }
  std::unordered_map<std::string, std::size_t> word_index;
  for (std::size_t k = 0; k < vocab.size(); ++k) word_index.emplace(vocab[k], k);

  std::vector<std::string> ids;
  std::vector<std::vector<double>> feats;
  std::vector<std::string> labels;
  while (std::getline(nodes, line)) {
    const auto fields = split_char(line, '\t');
    if (fields.size() < 2 || trim(fields[0]).empty()) continue;
    std::vector<double> row(vocab.size(), 0.0);
    std::string label;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const auto eq = fields[k].find('=');
      if (eq == std::string::npos) continue;
      const std::string key = fields[k].substr(0, eq);
      const std::string val = fields[k].substr(eq + 1);
      if (key == "label") {
        label = val;
      } else if (auto it = word_index.find(key); it != word_index.end()) {
        row[it->second] = parse_double(val, "pubmed node " + fields[0]);
      }
    }
    ids.push_back(trim(fields[0]));
    feats.push_back(std::move(row));
    labels.push_back(label);
  }

  auto cites = open_input(cites_path);
  std::vector<std::pair<std::string, std::string>> arcs;
  std::getline(cites, line);
  std::getline(cites, line);
  while (std::getline(cites, line)) {
    const auto fields = split_char(line, '\t');
    if (fields.size() < 4) continue;
    auto strip = [](const std::string& s) {
      const auto c = s.find(':');
      return trim(c == std::string::npos ? s : s.substr(c + 1));
    };
    arcs.emplace_back(strip(fields[1]), strip(fields[3]));
  }
  return assemble(std::move(ids), std::move(feats), std::move(labels), arcs, vocab.size());
}

}  // namespace gae
