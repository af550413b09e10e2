#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "gae/retrofit.hpp"

namespace gae {

RelationKind parse_relation_kind(const std::string& name) {
  if (name == "equivalence" || name == "equi" || name == "wikiPageRedirects") return RelationKind::equivalence;
  if (name == "relatedness" || name == "rel" || name == "stylisticOrigin" || name == "musicSubgenre" ||
      name == "derivative" || name == "musicFusionGenre") {
    return RelationKind::relatedness;
  }
  throw InvalidArgument("unknown relation kind '" + name + "'");
}

CompositionMode parse_composition_mode(const std::string& name) {
  if (name == "avg") return CompositionMode::avg;
  if (name == "sif") return CompositionMode::sif;
  throw InvalidArgument("unknown composition mode '" + name + "' (expected avg or sif)");
}

ConceptSpace make_concept_space(std::vector<std::string> concepts, Matrix initial, std::vector<char> known,
                                std::span<const RelationInput> relations) {
  const auto n = static_cast<int>(initial.rows());
  if (static_cast<int>(known.size()) != n) throw InvalidArgument("known flags must cover every concept");
  if (!concepts.empty() && static_cast<int>(concepts.size()) != n) {
    throw InvalidArgument("concept names must cover every concept");
  }
  std::vector<std::set<int>> neighbours(static_cast<std::size_t>(n));
  std::set<std::pair<int, int>> seen;
  for (const RelationInput& r : relations) {
    if (r.src < 0 || r.src >= n || r.dst < 0 || r.dst >= n) throw InvalidArgument("relation endpoint out of range");
    if (r.src == r.dst) throw InvalidArgument("relation from a concept to itself");
    if (!seen.emplace(r.src, r.dst).second) {
      throw InvalidArgument("duplicate relation " + std::to_string(r.src) + " -> " + std::to_string(r.dst));
    }
    if (r.beta && !(*r.beta >= 0.0)) throw InvalidArgument("relation weights must be non-negative");
    neighbours[r.src].insert(r.dst);
    neighbours[r.dst].insert(r.src);
  }
  ConceptSpace space;
  space.concepts = std::move(concepts);
  space.initial = std::move(initial);
  space.known = std::move(known);
  for (int i = 0; i < n; ++i) {
    if (!space.known[i]) space.initial.row(i).setZero();
  }
  space.relations.reserve(relations.size());
  for (const RelationInput& r : relations) {
    double beta = 1.0;
    if (r.kind == RelationKind::relatedness) {
      beta = r.beta ? *r.beta : 1.0 / static_cast<double>(neighbours[r.src].size());
    }
    space.relations.push_back({r.src, r.dst, beta});
  }
  return space;
}

Vector compose_embedding(std::span<const WordEntry> words, CompositionMode mode, int d, double a) {
  if (words.empty()) throw InvalidArgument("cannot compose an embedding from no words");
  if (mode == CompositionMode::sif && !(a > 0.0)) throw InvalidArgument("sif constant must be positive");
  Vector sum = Vector::Zero(d);
  int count = 0;
  for (const WordEntry& w : words) {
    if (!w.vector) continue;
    if (w.vector->size() != d) throw InvalidArgument("word vector has the wrong dimension");
    double weight = 1.0;
    if (mode == CompositionMode::sif) {
      if (!(w.rank >= 0.0)) throw InvalidArgument("word rank must be non-negative");
      weight = a / (a + 1.0 / (w.rank + 2.7));
    }
    sum += weight * *w.vector;
    ++count;
  }
  if (count == 0) return sum;
  return sum / static_cast<double>(count);
}

void sif_remove_first_component(Matrix& composed) {
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < composed.rows(); ++i) {
    if (composed.row(i).squaredNorm() > 0.0) rows.push_back(i);
  }
  if (rows.empty()) return;
  Matrix nonzero(static_cast<Eigen::Index>(rows.size()), composed.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) nonzero.row(static_cast<Eigen::Index>(k)) = composed.row(rows[k]);
  const Eigen::MatrixXd gram = nonzero.transpose() * nonzero;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success) throw NumericError("singular vector computation failed");
  const Vector u = eig.eigenvectors().col(gram.cols() - 1);
  const Vector proj = composed * u;
  composed -= proj * u.transpose();
}

namespace {

struct Neighbourhood {
  std::vector<std::vector<std::pair<int, double>>> adj;  // W_ij = beta_ij + beta_ji
};

Neighbourhood build_neighbourhood(const ConceptSpace& space) {
  std::vector<std::map<int, double>> rows(static_cast<std::size_t>(space.n()));
  for (const Relation& r : space.relations) {
    rows[r.src][r.dst] += r.beta;
    rows[r.dst][r.src] += r.beta;
  }
  Neighbourhood nb;
  nb.adj.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) nb.adj[i].assign(rows[i].begin(), rows[i].end());
  return nb;
}

void check_components(const ConceptSpace& space, const Neighbourhood& nb) {
  std::vector<int> comp(static_cast<std::size_t>(space.n()), -1);
  std::vector<int> stack;
  for (int s = 0; s < space.n(); ++s) {
    if (comp[s] >= 0) continue;
    bool anchored = false;
    comp[s] = s;
    stack.push_back(s);
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      anchored = anchored || space.known[i];
      for (const auto& [j, w] : nb.adj[i]) {
        if (comp[j] < 0) {
          comp[j] = s;
          stack.push_back(j);
        }
      }
    }
    if (!anchored) {
      const std::string name = space.concepts.empty() ? std::to_string(s) : space.concepts[s];
      throw InvalidArgument("concept '" + name +
                            "' lies in a connected component without any known vector; the retrofitting loss is "
                            "strictly convex only when every component holds at least one known vector");
    }
  }
}

// New value of row i from the rows in `from`; returns the largest change.
double update_row(const ConceptSpace& space, const Neighbourhood& nb, int i, const Matrix& from, Matrix& to) {
  const double alpha = space.known[i] ? 1.0 : 0.0;
  Vector num = alpha * space.initial.row(i).transpose();
  double den = alpha;
  for (const auto& [j, w] : nb.adj[i]) {
    num += w * from.row(j).transpose();
    den += w;
  }
  if (!(den > 0.0)) return 0.0;  // unknown and isolated: rejected earlier unless all weights vanish
  num /= den;
  const double change = (num.transpose() - to.row(i)).cwiseAbs().maxCoeff();
  to.row(i) = num.transpose();
  return change;
}

}  // namespace

RetrofitResult retrofit(const ConceptSpace& space, const RetrofitOptions& options) {
  if (options.max_iters < 1) throw InvalidArgument("retrofitting needs max_iters >= 1");
  if (!(options.tol >= 0.0)) throw InvalidArgument("retrofitting tolerance must be non-negative");
  const Neighbourhood nb = build_neighbourhood(space);
  check_components(space, nb);

  std::vector<int> order = options.node_order;
  if (order.empty()) {
    order.resize(static_cast<std::size_t>(space.n()));
    std::iota(order.begin(), order.end(), 0);
  } else {
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < space.n(); ++i) {
      if (static_cast<int>(sorted.size()) != space.n() || sorted[i] != i) {
        throw InvalidArgument("node order must be a permutation of the concepts");
      }
    }
  }

  RetrofitResult result;
  result.q = space.initial;
  Matrix next = result.q;
  for (int it = 0; it < options.max_iters; ++it) {
    double change = 0.0;
    if (options.order == UpdateOrder::jacobi) {
      for (int i = 0; i < space.n(); ++i) change = std::max(change, update_row(space, nb, i, result.q, next));
      result.q = next;
    } else {
      for (int i : order) change = std::max(change, update_row(space, nb, i, result.q, result.q));
    }
    result.iterations = it + 1;
    result.loss_trace.push_back(retrofit_loss(space, result.q));
    if (!result.q.allFinite()) throw NumericError("retrofitting produced non-finite values");
    if (change < options.tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

double retrofit_loss(const ConceptSpace& space, const Matrix& q) {
  if (q.rows() != space.initial.rows() || q.cols() != space.initial.cols()) {
    throw InvalidArgument("embedding matrix shape does not match the concept space");
  }
  double loss = 0.0;
  for (int i = 0; i < space.n(); ++i) {
    if (space.known[i]) loss += (q.row(i) - space.initial.row(i)).squaredNorm();
  }
  for (const Relation& r : space.relations) loss += r.beta * (q.row(r.src) - q.row(r.dst)).squaredNorm();
  return loss;
}

double cosine(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

std::vector<double> annotation_scores(const Matrix& q, std::span<const int> sources, std::span<const int> targets) {
  if (sources.empty()) throw InvalidArgument("annotation scoring needs at least one source tag");
  auto check = [&](int i) {
    if (i < 0 || i >= q.rows()) throw InvalidArgument("tag index out of range");
  };
  for (int s : sources) check(s);
  std::vector<double> scores;
  scores.reserve(targets.size());
  for (int t : targets) {
    check(t);
    double f = 0.0;
    const Vector qt = q.row(t).transpose();
    for (int s : sources) f += cosine(q.row(s).transpose(), qt);
    scores.push_back(f);
  }
  return scores;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

ConceptSpace load_concept_space(std::istream& vectors, std::istream& edges) {
  std::vector<std::string> names;
  std::unordered_map<std::string, int> index;
  std::vector<std::vector<double>> rows;
  int d = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(vectors, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2) {
      throw InvalidArgument("vectors line " + std::to_string(line_no) + ": expected 'tag<TAB>values'");
    }
    std::istringstream values(fields[1]);
    std::vector<double> row;
    double v = 0.0;
    while (values >> v) row.push_back(v);
    if (!values.eof()) throw InvalidArgument("vectors line " + std::to_string(line_no) + ": bad number");
    if (d < 0) d = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != d || d == 0) {
      throw InvalidArgument("vectors line " + std::to_string(line_no) + ": expected " + std::to_string(d) + " values");
    }
    if (!index.emplace(fields[0], static_cast<int>(names.size())).second) {
      throw InvalidArgument("vectors line " + std::to_string(line_no) + ": tag '" + fields[0] + "' repeated");
    }
    names.push_back(fields[0]);
    rows.push_back(std::move(row));
  }
  if (d < 0) throw InvalidArgument("vectors file holds no vectors");
  const std::size_t known_count = names.size();

  std::vector<RelationInput> relations;
  auto id_of = [&](const std::string& tag) {
    auto [it, inserted] = index.emplace(tag, static_cast<int>(names.size()));
    if (inserted) names.push_back(tag);
    return it->second;
  };
  line_no = 0;
  while (std::getline(edges, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 3 && fields.size() != 4) {
      throw InvalidArgument("edges line " + std::to_string(line_no) + ": expected 'src<TAB>dst<TAB>kind[<TAB>beta]'");
    }
    RelationInput r;
    r.src = id_of(fields[0]);
    r.dst = id_of(fields[1]);
    r.kind = parse_relation_kind(fields[2]);
    if (fields.size() == 4) {
      char* end = nullptr;
      const double beta = std::strtod(fields[3].c_str(), &end);
      if (end == fields[3].c_str() || *end != '\0') {
        throw InvalidArgument("edges line " + std::to_string(line_no) + ": bad weight");
      }
      r.beta = beta;
    }
    relations.push_back(r);
  }

  Matrix initial = Matrix::Zero(static_cast<Eigen::Index>(names.size()), d);
  std::vector<char> known(names.size(), 0);
  for (std::size_t i = 0; i < known_count; ++i) {
    for (int c = 0; c < d; ++c) initial(static_cast<Eigen::Index>(i), c) = rows[i][c];
    known[i] = 1;
  }
  return make_concept_space(std::move(names), std::move(initial), std::move(known), relations);
}

int find_concept(const ConceptSpace& space, const std::string& tag) {
  const auto it = std::find(space.concepts.begin(), space.concepts.end(), tag);
  return it == space.concepts.end() ? -1 : static_cast<int>(it - space.concepts.begin());
}

}  // namespace gae
