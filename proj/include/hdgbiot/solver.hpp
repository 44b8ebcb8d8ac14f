#pragma once

#include "hdgbiot/condense.hpp"
#include "hdgbiot/sparse_direct.hpp"

#include <functional>
#include <iosfwd>
#include <string>

namespace hdgbiot {

using Operator = std::function<Vec(const Vec&)>;

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;       // final preconditioned residual / initial
  double true_residual = 0.0;  // ||b - K x|| / ||b||
  std::vector<double> history;  // preconditioned residual estimate per iteration, relative
  double seconds = 0.0;
  // Ritz values of the preconditioned operator from the Lanczos recurrence.
  double ritz_min_abs = 0.0;
  double ritz_max_abs = 0.0;
  std::string method;
};

/// Preconditioned MinRes (Paige and Saunders). `M` applies the inverse of an
/// SPD preconditioner. Stops when the preconditioned residual norm drops
/// below tol times its initial value.
Vec minres(const Operator& K, const Operator& M, const Vec& b, double tol, int maxit, SolveReport& report);

void write_history(std::ostream& os, const SolveReport& r);

enum class PrecondKind { None, P1, P1Schur, P2 };
enum class DisplacementBlock { Condensed, Ubar };

std::string to_string(PrecondKind k);
PrecondKind parse_precond(const std::string& name);

/// Block-diagonal preconditioner diag(Au, Ap)^{-1} on (ubar, phat).
///   P1:       Au = A, Ap = A_phat + B_p (Mt_p^{-1} + A_p^{-1}) B_p^T
///   P1Schur:  Au = A, Ap = A_phat - B_p (Mt_p + A_p)^{-1} B_p^T
///   P2:       Au = A, Ap = C with M_p replaced by Mt_p
/// With DisplacementBlock::Ubar, Au = A_ubar instead of the condensed A.
class Preconditioner {
 public:
  static Preconditioner build(PrecondKind kind, const BlockSystem& b, const SpaceSet& s, const CondensedSystem& cs,
                              DisplacementBlock ublock = DisplacementBlock::Ubar);
  Vec apply(const Vec& x) const;
  PrecondKind kind() const { return kind_; }

 private:
  PrecondKind kind_ = PrecondKind::None;
  int n_ubar_ = 0;
  SpdSolver u_, p_;
};

/// Constants needed to fix the pressure level.
struct MeanData {
  Vec p_weights;  // int phi_i for P basis functions
  Vec p_one;      // coefficients of the constant 1 in P
  Vec phat_one;   // coefficients of the constant 1 in Phat
  double area = 0.0;
};
MeanData mean_data(const SpaceSet& s);

double pressure_mean(const MeanData& d, const Vec& p);

struct Compatibility {
  double mismatch = 0.0;  // int g + boundary flux before projection
  bool warning = false;
};
/// For S = 0: removes mismatch / |Omega| from g so that the rhs is orthogonal
/// to the constant pressure mode.
Compatibility make_compatible(const MeanData& d, Vec& g, const Vec& flux);
/// Adds c to (p, phat).
void shift_pressure(const MeanData& d, double c, Vec& p, Vec& phat);

struct SolveOptions {
  PrecondKind precond = PrecondKind::P2;
  DisplacementBlock ublock = DisplacementBlock::Ubar;
  double tol = 1e-10;
  int maxit = 2000;
  bool direct = false;
};

struct StaticSolution {
  Vec ubar, w, p, phat;
  SolveReport report;
  double p_mean = 0.0;  // mean of p before any shift
  Compatibility compat;
};

/// Condense, solve (MinRes or direct), recover, and handle the pressure level.
StaticSolution solve_static(const BlockSystem& b, const SpaceSet& s, const SolveOptions& opt);

}  // namespace hdgbiot
