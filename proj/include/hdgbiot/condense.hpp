#pragma once

#include "hdgbiot/forms.hpp"

#include <Eigen/Cholesky>

namespace hdgbiot {

/// Element data kept for recovery of (w, p).
struct LocalFactors {
  std::vector<int> u;     // numbered U dofs of the cell (ubar numbering)
  std::vector<int> w;     // W dofs
  std::vector<int> p;     // P dofs
  std::vector<int> phat;  // Phat dofs
  Eigen::LLT<Mat> Mw;     // R^{-1} mass on W(T)
  Eigen::LLT<Mat> D;      // M_p + B_w M_w^{-1} B_w^T
  Mat Bu;                 // |p| x |u|
  Mat Bw;                 // |p| x |w|
  Mat Bh;                 // |phat| x |w|
  Mat E;                  // B_w M_w^{-1} Bh^T, |p| x |phat|
};

/// Reduced (ubar, phat) saddle system
///
///   [ A  B^T ] [ubar]   [f + B_u^T D^{-1} g      ]
///   [ B  -C  ] [phat] = [flux - E^T D^{-1} g     ]
///
/// with D = M_p + B_w M_w^{-1} B_w^T, E = B_w M_w^{-1} Bhat_w^T,
/// A = A_ubar + B_u^T D^{-1} B_u, B = -E^T D^{-1} B_u and
/// C = Bhat_w M_w^{-1} Bhat_w^T - E^T D^{-1} E.
struct CondensedSystem {
  int n_ubar = 0;
  int n_w = 0;
  int n_p = 0;
  int n_phat = 0;
  SpMat A;  // n_ubar x n_ubar
  SpMat B;  // n_phat x n_ubar
  SpMat C;  // n_phat x n_phat
  std::vector<LocalFactors> cells;

  int size() const { return n_ubar + n_phat; }
  /// [[A, B^T], [B, -C]].
  SpMat matrix() const;
  Vec reduce_rhs(const Vec& f, const Vec& g, const Vec& flux) const;
  /// Local recovery from a reduced solution x = (ubar, phat).
  void recover(const Vec& x, const Vec& g, Vec& w, Vec& p) const;
};

CondensedSystem condense(const BlockSystem& b, const SpaceSet& s);

/// Pressure block C computed with `mass` in place of M_p (e.g. the gamma mass).
SpMat condensed_pressure_block(const BlockSystem& b, const SpaceSet& s, const SpMat& mass);

/// Element-wise p-hat blocks for the first preconditioner:
///   printed: A_phat + B_p (Mt_p^{-1} + A_p^{-1}) B_p^T
///   schur:   A_phat - B_p (Mt_p + A_p)^{-1} B_p^T
SpMat pressure_block_printed(const BlockSystem& b, const SpaceSet& s);
SpMat pressure_block_schur(const BlockSystem& b, const SpaceSet& s);

/// Dense submatrix A(rows, cols).
Mat extract_block(const SpMat& A, const std::vector<int>& rows, const std::vector<int>& cols);

}  // namespace hdgbiot
