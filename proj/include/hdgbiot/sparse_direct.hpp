#pragma once

#include "hdgbiot/types.hpp"

#include <memory>
#include <optional>

namespace hdgbiot {

/// Sparse Cholesky (CHOLMOD) of an SPD matrix.
class SpdSolver {
 public:
  SpdSolver();
  ~SpdSolver();
  SpdSolver(SpdSolver&&) noexcept;
  SpdSolver& operator=(SpdSolver&&) noexcept;

  /// Throws FactorizationError if the matrix is not numerically SPD.
  void compute(const SpMat& A, const std::string& name = "block");
  Vec solve(const Vec& b) const;
  int rows() const { return n_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_ = 0;
};

/// Sparse LU (UMFPACK) of a general square matrix.
class LuSolver {
 public:
  LuSolver();
  ~LuSolver();
  LuSolver(LuSolver&&) noexcept;
  LuSolver& operator=(LuSolver&&) noexcept;

  void compute(const SpMat& A, const std::string& name = "system");
  Vec solve(const Vec& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Direct solve of K x = b. If `pin` is set, that unknown is fixed to zero
/// (row and column replaced by the identity) to remove a one-dimensional kernel.
Vec solve_direct(const SpMat& K, const Vec& b, std::optional<int> pin = std::nullopt);

/// Row/column `i` replaced by the identity.
SpMat pin_dof(const SpMat& K, int i);

}  // namespace hdgbiot
