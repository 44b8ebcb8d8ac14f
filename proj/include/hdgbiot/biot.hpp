#pragma once

#include "hdgbiot/solver.hpp"

#include <limits>

namespace hdgbiot {

/// Physical parameters; pressures are measured in the units of the Lame
/// parameters.
struct PhysicalParams {
  double mu = 0.5;
  double lambda = 0.0;
  double alpha = 1.0;
  double S0 = 0.0;
  double K = 1.0;
  double tau = 1.0;

  void validate() const;
};

/// lambda = lambda~/(2 mu~), R = 2 mu~ tau K / alpha^2, S = 2 mu~ S0 / alpha^2.
ScaledParams scale_params(const PhysicalParams& p, double eta = 10.0, double eta_p = 10.0);

using TensorFn = std::function<Mat2(const Point&)>;

/// Exact fields and loads of the scaled static system.
struct ManufacturedCase {
  ScaledParams params;
  VectorFn u;
  TensorFn grad_u;  // (c, d) = d u_c / d x_d
  ScalarFn p;
  VectorFn grad_p;
  VectorFn w;
  VectorFn f;
  ScalarFn g;

  Loads loads() const { return Loads{f, g, w}; }
};

/// u = curl of x^2(1-x)^2 y^2(1-y)^2, p = sin(pi x) sin(pi y) - 4/pi^2 on the unit square.
ManufacturedCase manufactured_2d(const ScaledParams& p);

struct ErrorRow {
  int cells = 0;
  double h = 0.0;
  double grad_u = 0.0;   // broken ||grad(u - u_h)||
  double u = 0.0;        // ||u - u_h||
  double grad_p = std::numeric_limits<double>::quiet_NaN();  // broken; NaN for l = 1
  double p = 0.0;        // ||p - p_h||
  double flux = 0.0;     // ||grad p + R^{-1} w_h||
  double p_proj = 0.0;   // ||(Pi p, Pi_hat p) - (p_h, phat_h)|| in the pressure norm
  double div_max = 0.0;  // max |div u_h| over quadrature points
};

ErrorRow compute_errors(const ManufacturedCase& mc, const SpaceSet& s, const StaticSolution& sol);

/// Max |div u_h| over the points of a triangle rule of the given degree.
double max_divergence(const SpaceSet& s, const Vec& ubar, int degree);

/// log2(coarse / fine).
double eoc(double coarse, double fine);

/// Implicit Euler in scaled variables: ubar = alpha u, w = tau w, p = alpha^2 p / (2 mu~).
class TimeStepper {
 public:
  TimeStepper(const SpaceSet& s, const PhysicalParams& phys, SolveOptions opt = {});

  /// Initial state from physical fields (u is interpolated, p projected).
  void set_initial(const VectorFn& u0, const ScalarFn& p0);
  /// Initial state from scaled coefficient vectors.
  void set_state(const Vec& ubar, const Vec& p);

  /// Advances one step with physical loads evaluated at the new time level.
  const StaticSolution& step(const VectorFn& f_tilde, const ScalarFn& g_tilde);

  double time() const { return t_; }
  int steps() const { return k_; }
  const ScaledParams& scaled() const { return params_; }
  const StaticSolution& state() const { return state_; }

  /// Physical coefficients.
  Vec physical_u() const { return state_.ubar / phys_.alpha; }
  Vec physical_w() const { return state_.w / phys_.tau; }
  Vec physical_p() const { return state_.p * (2 * phys_.mu) / (phys_.alpha * phys_.alpha); }

 private:
  const SpaceSet* s_;
  PhysicalParams phys_;
  ScaledParams params_;
  SolveOptions opt_;
  BlockSystem blocks_;
  StaticSolution state_;
  double t_ = 0.0;
  int k_ = 0;
};

}  // namespace hdgbiot
