#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gae {

/// Dense row-major matrix; one row per node throughout the library.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Malformed input, bad configuration or violated precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values or another numerical breakdown at run time.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Formats a double with 17 significant digits so it parses back bit-exactly.
std::string format_double(double value);

/// Derives an independent stream seed from a base seed and a stream tag.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Uniform Glorot-style initialization in +-sqrt(6 / (rows + cols)).
Matrix glorot_uniform(Eigen::Index rows, Eigen::Index cols, Rng& rng);

}  // namespace gae
