#include "hdgbiot/sparse_direct.hpp"

#include <Eigen/CholmodSupport>
#include <Eigen/UmfPackSupport>

namespace hdgbiot {

struct SpdSolver::Impl {
  Eigen::CholmodSupernodalLLT<SpMat> llt;
};

SpdSolver::SpdSolver() : impl_(std::make_unique<Impl>()) {}
SpdSolver::~SpdSolver() = default;
SpdSolver::SpdSolver(SpdSolver&&) noexcept = default;
SpdSolver& SpdSolver::operator=(SpdSolver&&) noexcept = default;

void SpdSolver::compute(const SpMat& A, const std::string& name) {
  if (A.rows() != A.cols()) throw InvalidArgument("SpdSolver: matrix not square");
  impl_->llt.compute(A);
  if (impl_->llt.info() != Eigen::Success) {
    throw FactorizationError("Cholesky factorization of " + name + " failed: matrix is not positive definite");
  }
  n_ = static_cast<int>(A.rows());
}

Vec SpdSolver::solve(const Vec& b) const { return impl_->llt.solve(b); }

struct LuSolver::Impl {
  SpMat matrix;  // UMFPACK solves read the matrix arrays again
  Eigen::UmfPackLU<SpMat> lu;
};

LuSolver::LuSolver() : impl_(std::make_unique<Impl>()) {}
LuSolver::~LuSolver() = default;
LuSolver::LuSolver(LuSolver&&) noexcept = default;
LuSolver& LuSolver::operator=(LuSolver&&) noexcept = default;

void LuSolver::compute(const SpMat& A, const std::string& name) {
  impl_->matrix = A;
  impl_->matrix.makeCompressed();
  impl_->lu.compute(impl_->matrix);
  if (impl_->lu.info() != Eigen::Success) throw FactorizationError("LU factorization of " + name + " failed");
}

Vec LuSolver::solve(const Vec& b) const { return impl_->lu.solve(b); }

SpMat pin_dof(const SpMat& K, int i) {
  SpMat P = K;
  for (int k = 0; k < P.outerSize(); ++k)
    for (SpMat::InnerIterator it(P, k); it; ++it)
      if (it.row() == i || it.col() == i) it.valueRef() = it.row() == it.col() ? 1.0 : 0.0;
  if (P.coeff(i, i) != 1.0) P.coeffRef(i, i) = 1.0;
  P.prune(0.0);
  return P;
}

Vec solve_direct(const SpMat& K, const Vec& b, std::optional<int> pin) {
  LuSolver lu;
  if (pin) {
    Vec rhs = b;
    rhs[*pin] = 0.0;
    lu.compute(pin_dof(K, *pin));
    return lu.solve(rhs);
  }
  lu.compute(K);
  return lu.solve(b);
}

}  // namespace hdgbiot
