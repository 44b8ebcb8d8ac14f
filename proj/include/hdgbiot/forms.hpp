#pragma once

#include "hdgbiot/spaces.hpp"
#include "hdgbiot/types.hpp"

#include <iosfwd>
#include <optional>

namespace hdgbiot {

/// Parameters of the scaled static system.
struct ScaledParams {
  double lambda = 1.0;
  double R = 1.0;
  double S = 1.0;
  double eta = 10.0;
  double eta_p = 10.0;

  double gamma() const { return S + 1.0 / std::max(1.0, lambda); }
  void validate() const;
};

/// Quadrature degree used for bilinear forms at order l.
inline int form_degree(int l) { return 2 * l + 2; }

/// Assembled blocks. Row/column layout of the monolithic operator is
/// [ubar = (U, Uhat), W, P, Phat]:
///
///   [ A_ubar  0       B_u^T   0        ]
///   [ 0       M_w     B_w^T   Bhat_w^T ]
///   [ B_u     B_w     -M_p    0        ]
///   [ 0       Bhat_w  0       0        ]
///
/// with B_u = -(div u, q), B_w = -(div w, q)_T and Bhat_w = (w.n, qhat)_dT,
/// i.e. the negated hybrid b-form.
struct BlockSystem {
  ScaledParams params;
  SpMat A_ubar;   // nubar x nubar
  SpMat B_u;      // nP x nubar (zero in the Uhat columns)
  SpMat M_w;      // R^{-1} mass
  SpMat B_w;      // nP x nW
  SpMat Bhat_w;   // nPhat x nW
  SpMat M_p;      // S mass
  SpMat Mt_p;     // gamma mass
  SpMat A_p;      // nP x nP
  SpMat B_p;      // nPhat x nP, entry (qhat, p) = b_p(p, qhat)
  SpMat A_phat;   // nPhat x nPhat
  Vec f;          // nubar
  Vec g;          // nP
  Vec flux;       // nPhat, boundary normal-flux data

  int n_ubar() const { return static_cast<int>(A_ubar.rows()); }
  int n_w() const { return static_cast<int>(M_w.rows()); }
  int n_p() const { return static_cast<int>(M_p.rows()); }
  int n_phat() const { return static_cast<int>(A_phat.rows()); }
  int n_total() const { return n_ubar() + n_w() + n_p() + n_phat(); }
};

SpMat assemble_hdg_elasticity(const SpaceSet& s, const ScaledParams& p);
/// SIPG elasticity plus lambda div-div on the H(div) space `U` (no facet unknowns).
SpMat assemble_dg_elasticity(const Mesh& m, const DofMap& U, int l, const ScaledParams& p);
void assemble_b_form(const SpaceSet& s, SpMat& B_w, SpMat& Bhat_w);
void assemble_masses(const SpaceSet& s, const ScaledParams& p, SpMat& M_w, SpMat& M_p, SpMat& Mt_p);
SpMat assemble_div_coupling(const SpaceSet& s);
void assemble_pressure_hdg_laplacian(const SpaceSet& s, const ScaledParams& p, SpMat& A_p, SpMat& B_p, SpMat& A_phat);

/// Scalar mass with weight `w` on a broken scalar or broken RT space.
SpMat assemble_mass(const Mesh& m, const DofMap& map, double w);

struct Loads {
  VectorFn f;                   // momentum load
  ScalarFn g;                   // mass-balance load
  std::optional<VectorFn> w_boundary;  // exact flux whose normal trace is imposed weakly on the boundary
};

void assemble_rhs(const SpaceSet& s, const Loads& loads, Vec& f_h, Vec& g_h, Vec& flux_h);

BlockSystem assemble_block_system(const SpaceSet& s, const ScaledParams& p, const Loads& loads);

/// Monolithic operator and rhs in the layout documented on BlockSystem.
SpMat full_operator(const BlockSystem& b);
Vec full_rhs(const BlockSystem& b);

/// (row, col, value) text, one entry per line, 0-based.
void write_coo(std::ostream& os, const SpMat& A);

/// Max |A - A^T| / max |A|.
double symmetry_defect(const SpMat& A);

}  // namespace hdgbiot
