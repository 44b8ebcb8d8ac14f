#pragma once

#include "hdgbiot/biot.hpp"
#include "hdgbiot/darcy.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hdgbiot {

/// Meshes of the refinement sequence: unit_square_mesh(base_n) refined
/// 0..levels times.
std::vector<std::shared_ptr<const Mesh>> mesh_sequence(int base_n, int levels);

// ---- convergence -----------------------------------------------------------

struct ConvergenceRow {
  int l = 0;
  int level = 0;
  ErrorRow err;
  // NaN on the first level
  double eoc_grad_u, eoc_u, eoc_grad_p, eoc_p, eoc_flux, eoc_p_proj;
  int iterations = 0;
  bool converged = false;
  double seconds = 0.0;
};

/// Manufactured solve on every mesh of the sequence. Solver failures are
/// recorded in the row, not thrown.
std::vector<ConvergenceRow> run_convergence(int l, const std::vector<std::shared_ptr<const Mesh>>& meshes,
                                            const ScaledParams& params, const SolveOptions& opt);

/// Header:
/// l,level,cells,h,err_grad_u,eoc_grad_u,err_u,eoc_u,err_grad_p,eoc_grad_p,
/// err_p,eoc_p,err_flux,eoc_flux,err_p_proj,eoc_p_proj,div_max,iterations,converged,seconds
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);

// ---- robustness ------------------------------------------------------------

enum class Sweep { Rinv, Lambda, S };
std::string to_string(Sweep s);
Sweep parse_sweep(const std::string& name);
/// R^-1 in 1..1e12, lambda in 1..1e6, S in 1e-16..1, each by factors of 100.
std::vector<double> default_sweep(Sweep s);
/// Baseline (lambda, R, S) = (1, 1, 1) with the swept parameter replaced.
ScaledParams sweep_params(Sweep s, double value, const ScaledParams& base = ScaledParams{});

struct RobustnessRow {
  Sweep sweep = Sweep::Rinv;
  double value = 0.0;
  int l = 0;
  int cells = 0;
  PrecondKind precond = PrecondKind::P2;
  int iterations = 0;  // maxit when not converged
  bool converged = false;
  double residual = 0.0;
  double true_residual = 0.0;
  double ritz_min = 0.0;
  double ritz_max = 0.0;
  double seconds = 0.0;
  SolveReport report;  // kept for history dumps
};

/// One MinRes solve of the manufactured system per sweep value.
std::vector<RobustnessRow> run_robustness(std::shared_ptr<const Mesh> mesh, int l, Sweep sweep,
                                          const std::vector<double>& values, const SolveOptions& opt,
                                          const ScaledParams& base = ScaledParams{}, int threads = 1);

/// Header: sweep,value,l,cells,precond,iterations,converged,residual,true_residual,ritz_min,ritz_max,seconds
void write_robustness_csv(std::ostream& os, const std::vector<RobustnessRow>& rows);

// ---- cost ------------------------------------------------------------------

struct CostRow {
  std::string method;  // DG, HDG, M, HM
  int l = 0;
  long dof = 0;
  long cdof = 0;
  long nze = 0;
};

/// DG and HDG elasticity at order l. HDG counts treat the BDM interior
/// bubbles as condensable.
std::vector<CostRow> cost_elasticity(std::shared_ptr<const Mesh> mesh, int l);
/// Mixed and hybrid mixed Darcy at RT_k; rows carry l = k.
std::vector<CostRow> cost_darcy(std::shared_ptr<const Mesh> mesh, int k);
/// Smallest l with HDG nze < DG nze, if any.
std::optional<int> nze_crossover(const std::vector<CostRow>& rows);

/// Header: method,l,dof,cdof,nze
void write_cost_csv(std::ostream& os, const std::vector<CostRow>& rows);

// ---- Darcy equivalence -----------------------------------------------------

struct DarcyRow {
  int k = 0;
  int cells = 0;
  double diff_w = 0.0;  // relative, M vs HM
  double diff_p = 0.0;
  double jump_max = 0.0;
  long hm_cdof = 0;
  long phat_ndof = 0;
};

DarcyRow run_darcy(std::shared_ptr<const Mesh> mesh, int k);

/// Header: k,cells,diff_w,diff_p,jump_max,hm_cdof,phat_ndof
void write_darcy_csv(std::ostream& os, const std::vector<DarcyRow>& rows);

// ---- time stepping ---------------------------------------------------------

struct TimestepRow {
  int step = 0;
  double time = 0.0;
  double u_norm = 0.0;  // Euclidean norms of the physical coefficient vectors
  double w_norm = 0.0;
  double p_norm = 0.0;
  double div_max = 0.0;
  int iterations = 0;
};

/// Consolidation from rest under a constant body force and source.
std::vector<TimestepRow> run_timestep_demo(std::shared_ptr<const Mesh> mesh, int l, const PhysicalParams& phys,
                                           int steps, const SolveOptions& opt);

/// Header: step,time,u_norm,w_norm,p_norm,div_max,iterations
void write_timestep_csv(std::ostream& os, const std::vector<TimestepRow>& rows);

}  // namespace hdgbiot
