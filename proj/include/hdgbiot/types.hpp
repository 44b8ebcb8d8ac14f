#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>
#include <vector>

namespace hdgbiot {

using Point = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Triplets = std::vector<Triplet>;

// Error types. All derive from std::runtime_error / std::invalid_argument so
// callers that do not care about the category can catch the standard base.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularGeometry : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedDegree : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised by static condensation when an element block cannot be factorized.
struct SingularLocalBlock : std::runtime_error {
  SingularLocalBlock(int cell, double rcond, const std::string& what)
      : std::runtime_error(what), cell(cell), rcond(rcond) {}
  int cell;
  double rcond;
};

/// Raised when a sparse factorization of a preconditioner or system block fails.
struct FactorizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hdgbiot
