#pragma once

#include <vector>

#include "gae/model.hpp"

namespace gae::detail {

/// Reconstruction and modularity terms over every ordered pair (diagonal
/// included) of a node set S. Row i of `z` and node i of `labels` refer to
/// the same member of S.
struct PairLossInput {
  const Matrix* z = nullptr;
  const SparseGraph* labels = nullptr;  // adjacency among S, local ids
  DecoderConfig decoder;
  double w_pos = 1.0;
  const ModularityReg* modularity = nullptr;
  const std::vector<double>* degrees = nullptr;  // degrees of S in the full graph
  double two_m = 0.0;                            // total degree of the full graph
};

struct PairLossValue {
  double reconstruction = 0.0;
  double modularity = 0.0;
};

/// Blockwise evaluation; O(|S|^2 d) time and O(|S| d + block) memory.
/// Adds nothing to `grad` when null, otherwise overwrites it with dL/dz.
PairLossValue pair_losses(const PairLossInput& in, Matrix* grad);

/// (#pairs - #positive) / #positive for labels A + I, at least 1.
double positive_weight(const SparseGraph& labels);

}  // namespace gae::detail
