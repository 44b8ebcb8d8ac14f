#include "hdgbiot/experiments.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <thread>

namespace hdgbiot {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs body(i) for i in [0, n) on up to `threads` workers; results are
// written by index so the output order does not depend on scheduling.
template <class F>
void parallel_for(int n, int threads, F&& body) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) body(i);
    });
}

void put(std::ostream& os, double v) {
  if (std::isnan(v))
    os << "nan";
  else
    os << v;
}

}  // namespace

std::vector<std::shared_ptr<const Mesh>> mesh_sequence(int base_n, int levels) {
  std::vector<std::shared_ptr<const Mesh>> out;
  Mesh m = unit_square_mesh(base_n);
  for (int k = 0; k <= levels; ++k) {
    if (k > 0) m = refine_uniform(m);
    out.push_back(std::make_shared<const Mesh>(m));
  }
  return out;
}

std::vector<ConvergenceRow> run_convergence(int l, const std::vector<std::shared_ptr<const Mesh>>& meshes,
                                            const ScaledParams& params, const SolveOptions& opt) {
  const ManufacturedCase mc = manufactured_2d(params);
  std::vector<ConvergenceRow> rows;
  for (size_t i = 0; i < meshes.size(); ++i) {
    ConvergenceRow r;
    r.l = l;
    r.level = static_cast<int>(i);
    r.eoc_grad_u = r.eoc_u = r.eoc_grad_p = r.eoc_p = r.eoc_flux = r.eoc_p_proj = kNaN;
    try {
      const SpaceSet s = build_spaces(meshes[i], l);
      const BlockSystem b = assemble_block_system(s, params, mc.loads());
      const StaticSolution sol = solve_static(b, s, opt);
      r.err = compute_errors(mc, s, sol);
      r.iterations = sol.report.iterations;
      r.converged = sol.report.converged;
      r.seconds = sol.report.seconds;
    } catch (const std::exception&) {
      r.err.cells = meshes[i]->num_cells();
      r.err.grad_u = r.err.u = r.err.grad_p = r.err.p = r.err.flux = r.err.p_proj = r.err.div_max = kNaN;
      r.converged = false;
    }
    if (!rows.empty()) {
      const ErrorRow& c = rows.back().err;
      r.eoc_grad_u = eoc(c.grad_u, r.err.grad_u);
      r.eoc_u = eoc(c.u, r.err.u);
      r.eoc_grad_p = eoc(c.grad_p, r.err.grad_p);
      r.eoc_p = eoc(c.p, r.err.p);
      r.eoc_flux = eoc(c.flux, r.err.flux);
      r.eoc_p_proj = eoc(c.p_proj, r.err.p_proj);
    }
    rows.push_back(r);
  }
  return rows;
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "l,level,cells,h,err_grad_u,eoc_grad_u,err_u,eoc_u,err_grad_p,eoc_grad_p,err_p,eoc_p,err_flux,eoc_flux,"
        "err_p_proj,eoc_p_proj,div_max,iterations,converged,seconds\n";
  os.precision(8);
  for (const auto& r : rows) {
    os << r.l << ',' << r.level << ',' << r.err.cells << ',';
    for (double v : {r.err.h, r.err.grad_u, r.eoc_grad_u, r.err.u, r.eoc_u, r.err.grad_p, r.eoc_grad_p, r.err.p,
                     r.eoc_p, r.err.flux, r.eoc_flux, r.err.p_proj, r.eoc_p_proj, r.err.div_max}) {
      put(os, v);
      os << ',';
    }
    os << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << r.seconds << '\n';
  }
}

std::string to_string(Sweep s) {
  switch (s) {
    case Sweep::Rinv: return "Rinv";
    case Sweep::Lambda: return "lambda";
    case Sweep::S: return "S";
  }
  return "?";
}

Sweep parse_sweep(const std::string& name) {
  for (Sweep s : {Sweep::Rinv, Sweep::Lambda, Sweep::S})
    if (to_string(s) == name) return s;
  throw InvalidArgument("unknown sweep '" + name + "' (expected Rinv, lambda or S)");
}

std::vector<double> default_sweep(Sweep s) {
  std::vector<double> v;
  switch (s) {
    case Sweep::Rinv:
      for (int e = 0; e <= 12; e += 2) v.push_back(std::pow(10.0, e));
      break;
    case Sweep::Lambda:
      for (int e = 0; e <= 6; ++e) v.push_back(std::pow(10.0, e));
      break;
    case Sweep::S:
      for (int e = -16; e <= 0; e += 2) v.push_back(std::pow(10.0, e));
      break;
  }
  return v;
}

ScaledParams sweep_params(Sweep s, double value, const ScaledParams& base) {
  ScaledParams p = base;
  switch (s) {
    case Sweep::Rinv: p.R = 1.0 / value; break;
    case Sweep::Lambda: p.lambda = value; break;
    case Sweep::S: p.S = value; break;
  }
  return p;
}

std::vector<RobustnessRow> run_robustness(std::shared_ptr<const Mesh> mesh, int l, Sweep sweep,
                                          const std::vector<double>& values, const SolveOptions& opt,
                                          const ScaledParams& base, int threads) {
  if (values.empty()) throw InvalidArgument("robustness: empty sweep list");
  const SpaceSet s = build_spaces(mesh, l);
  std::vector<RobustnessRow> rows(values.size());
  parallel_for(static_cast<int>(values.size()), threads, [&](int i) {
    RobustnessRow& r = rows[i];
    r.sweep = sweep;
    r.value = values[i];
    r.l = l;
    r.cells = mesh->num_cells();
    r.precond = opt.precond;
    const ScaledParams p = sweep_params(sweep, values[i], base);
    const BlockSystem b = assemble_block_system(s, p, manufactured_2d(p).loads());
    SolveOptions o = opt;
    o.direct = false;
    const StaticSolution sol = solve_static(b, s, o);
    r.report = sol.report;
    r.converged = sol.report.converged;
    r.iterations = r.converged ? sol.report.iterations : o.maxit;
    r.residual = sol.report.residual;
    r.true_residual = sol.report.true_residual;
    r.ritz_min = sol.report.ritz_min_abs;
    r.ritz_max = sol.report.ritz_max_abs;
    r.seconds = sol.report.seconds;
  });
  return rows;
}

void write_robustness_csv(std::ostream& os, const std::vector<RobustnessRow>& rows) {
  os << "sweep,value,l,cells,precond,iterations,converged,residual,true_residual,ritz_min,ritz_max,seconds\n";
  os.precision(8);
  for (const auto& r : rows)
    os << to_string(r.sweep) << ',' << r.value << ',' << r.l << ',' << r.cells << ',' << to_string(r.precond) << ','
       << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << r.residual << ',' << r.true_residual << ','
       << r.ritz_min << ',' << r.ritz_max << ',' << r.seconds << '\n';
}

std::vector<CostRow> cost_elasticity(std::shared_ptr<const Mesh> mesh, int l) {
  const Mesh& m = *mesh;
  const SpaceSet s = build_spaces(mesh, l);
  std::vector<CostRow> rows;

  const SpMat dg = assemble_dg_elasticity(m, s.U, l, ScaledParams{});
  rows.push_back({"DG", l, s.U.ndof, s.U.ndof, static_cast<long>(dg.nonZeros())});

  const LocalBasis& bu = local_basis(Family::BDM, l);
  const int nubar = s.U.ndof + s.Uhat.ndof;
  std::vector<std::vector<int>> sets(m.num_cells());
  std::set<int> coupled;
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto du = s.U.dofs(c);
    for (int i = 0; i < bu.ndof; ++i)
      if (bu.dofs[i].kind == DofKind::EdgeMoment && du[i] >= 0) {
        sets[c].push_back(du[i]);
        coupled.insert(du[i]);
      }
    for (int i : s.Uhat.dofs(c))
      if (i >= 0) sets[c].push_back(s.U.ndof + i);
  }
  rows.push_back({"HDG", l, nubar, static_cast<long>(coupled.size()) + s.Uhat.ndof, clique_nonzeros(nubar, sets)});
  return rows;
}

std::vector<CostRow> cost_darcy(std::shared_ptr<const Mesh> mesh, int k) {
  const DarcyCase dc = darcy_manufactured();
  const DarcySolution m = solve_darcy_mixed(mesh, k, dc);
  const DarcySolution h = solve_darcy_hybrid(mesh, k, dc);
  return {{"M", k, m.dof, m.cdof, m.nze}, {"HM", k, h.dof, h.cdof, h.nze}};
}

std::optional<int> nze_crossover(const std::vector<CostRow>& rows) {
  std::optional<int> best;
  for (const auto& a : rows) {
    if (a.method != "HDG") continue;
    for (const auto& b : rows)
      if (b.method == "DG" && b.l == a.l && a.nze < b.nze && (!best || a.l < *best)) best = a.l;
  }
  return best;
}

void write_cost_csv(std::ostream& os, const std::vector<CostRow>& rows) {
  os << "method,l,dof,cdof,nze\n";
  for (const auto& r : rows) os << r.method << ',' << r.l << ',' << r.dof << ',' << r.cdof << ',' << r.nze << '\n';
}

DarcyRow run_darcy(std::shared_ptr<const Mesh> mesh, int k) {
  const DarcyCase dc = darcy_manufactured();
  const DarcySolution m = solve_darcy_mixed(mesh, k, dc);
  const DarcySolution h = solve_darcy_hybrid(mesh, k, dc);
  DarcyRow r;
  r.k = k;
  r.cells = mesh->num_cells();
  r.diff_w = (h.w - m.w).norm() / m.w.norm();
  r.diff_p = (h.p - m.p).norm() / m.p.norm();
  r.jump_max = h.jump_max;
  r.hm_cdof = h.cdof;
  r.phat_ndof = h.phat.size();
  return r;
}

void write_darcy_csv(std::ostream& os, const std::vector<DarcyRow>& rows) {
  os << "k,cells,diff_w,diff_p,jump_max,hm_cdof,phat_ndof\n";
  os.precision(6);
  for (const auto& r : rows)
    os << r.k << ',' << r.cells << ',' << r.diff_w << ',' << r.diff_p << ',' << r.jump_max << ',' << r.hm_cdof << ','
       << r.phat_ndof << '\n';
}

std::vector<TimestepRow> run_timestep_demo(std::shared_ptr<const Mesh> mesh, int l, const PhysicalParams& phys,
                                           int steps, const SolveOptions& opt) {
  const SpaceSet s = build_spaces(mesh, l);
  TimeStepper ts(s, phys, opt);
  const VectorFn f = [](const Point& x) { return Point(0.0, -1.0 - x.x()); };
  const ScalarFn g = [](const Point& x) { return std::sin(std::numbers::pi * x.x()) * std::sin(std::numbers::pi * x.y()); };
  std::vector<TimestepRow> rows;
  for (int k = 0; k < steps; ++k) {
    const StaticSolution& st = ts.step(f, g);
    TimestepRow r;
    r.step = ts.steps();
    r.time = ts.time();
    r.u_norm = ts.physical_u().norm();
    r.w_norm = ts.physical_w().norm();
    r.p_norm = ts.physical_p().norm();
    r.div_max = max_divergence(s, st.ubar, 2 * l + 2);
    r.iterations = st.report.iterations;
    rows.push_back(r);
  }
  return rows;
}

void write_timestep_csv(std::ostream& os, const std::vector<TimestepRow>& rows) {
  os << "step,time,u_norm,w_norm,p_norm,div_max,iterations\n";
  os.precision(8);
  for (const auto& r : rows)
    os << r.step << ',' << r.time << ',' << r.u_norm << ',' << r.w_norm << ',' << r.p_norm << ',' << r.div_max << ','
       << r.iterations << '\n';
}

}  // namespace hdgbiot
