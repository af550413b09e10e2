#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gae/common.hpp"

namespace gae {

enum class RelationKind { equivalence, relatedness };
RelationKind parse_relation_kind(const std::string& name);

struct Relation {
  int src = 0;
  int dst = 0;
  double beta = 1.0;
};

struct RelationInput {
  int src = 0;
  int dst = 0;
  RelationKind kind = RelationKind::relatedness;
  std::optional<double> beta;  // relatedness only; defaults to 1 / degree(src)
};

/// Concepts with optional initial vectors and weighted directed relations.
struct ConceptSpace {
  std::vector<std::string> concepts;
  Matrix initial;           // n x d; rows of unknown concepts are zero
  std::vector<char> known;  // alpha_i
  std::vector<Relation> relations;

  int n() const { return static_cast<int>(initial.rows()); }
};

/// Resolves relation weights: 1 on equivalence edges, the given value or
/// 1 / degree(src) on relatedness edges, where degree counts distinct
/// neighbours in the undirected relation graph.
ConceptSpace make_concept_space(std::vector<std::string> concepts, Matrix initial, std::vector<char> known,
                                std::span<const RelationInput> relations);

enum class CompositionMode { avg, sif };
CompositionMode parse_composition_mode(const std::string& name);

struct WordEntry {
  std::optional<Vector> vector;  // empty when out of vocabulary
  double rank = 0.0;             // position in the frequency-sorted vocabulary
};

/// Mean of the known word vectors, weighted by a / (a + 1 / (rank + 2.7)) in
/// sif mode. All words unknown yields the zero vector of size d.
Vector compose_embedding(std::span<const WordEntry> words, CompositionMode mode, int d, double a = 1e-3);

/// Removes the projection on the first right singular vector of the nonzero rows.
void sif_remove_first_component(Matrix& composed);

enum class UpdateOrder { jacobi, gauss_seidel };

struct RetrofitOptions {
  int max_iters = 100;
  double tol = 1e-6;
  UpdateOrder order = UpdateOrder::jacobi;
  std::vector<int> node_order;  // Gauss-Seidel visiting order; ascending when empty
};

struct RetrofitResult {
  Matrix q;
  int iterations = 0;
  bool converged = false;
  std::vector<double> loss_trace;  // loss after each sweep
};

/// Iterates q_i <- (sum_j W_ij q_j + alpha_i qhat_i) / (sum_j W_ij + alpha_i)
/// with W_ij = beta_ij + beta_ji, until the largest coordinate change is below tol.
RetrofitResult retrofit(const ConceptSpace& space, const RetrofitOptions& options = {});

/// sum_i alpha_i ||q_i - qhat_i||^2 + sum_(i,j) beta_ij ||q_i - q_j||^2.
double retrofit_loss(const ConceptSpace& space, const Matrix& q);

/// Cosine similarity; zero when either vector is zero.
double cosine(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

/// f_t = sum_s cos(q_s, q_t) for every target t.
std::vector<double> annotation_scores(const Matrix& q, std::span<const int> sources, std::span<const int> targets);

/// Vectors file: "tag<TAB>v1 v2 ... vd" per line. Edges file:
/// "src<TAB>dst<TAB>kind[<TAB>beta]". Concepts that only appear in the edges
/// file are unknown.
ConceptSpace load_concept_space(std::istream& vectors, std::istream& edges);

/// Index of a concept by tag, or -1.
int find_concept(const ConceptSpace& space, const std::string& tag);

}  // namespace gae
