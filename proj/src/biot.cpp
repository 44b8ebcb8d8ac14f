#include "hdgbiot/biot.hpp"

#include "hdgbiot/cell_context.hpp"
#include "hdgbiot/norms.hpp"

#include <cmath>
#include <numbers>

namespace hdgbiot {

using std::numbers::pi;

void PhysicalParams::validate() const {
  if (!(mu > 0) || !(K > 0) || !(tau > 0) || !(alpha > 0) || !(S0 >= 0) || !(lambda >= 0)) {
    throw InvalidArgument("PhysicalParams: need mu, K, tau, alpha > 0 and S0, lambda >= 0");
  }
}

ScaledParams scale_params(const PhysicalParams& p, double eta, double eta_p) {
  p.validate();
  ScaledParams s;
  s.lambda = p.lambda / (2 * p.mu);
  s.R = 2 * p.mu * p.tau * p.K / (p.alpha * p.alpha);
  s.S = 2 * p.mu * p.S0 / (p.alpha * p.alpha);
  s.eta = eta;
  s.eta_p = eta_p;
  return s;
}

namespace {

// a(t) = t^2 (1-t)^2 and derivatives
struct Quartic {
  double v, d1, d2, d3;
  explicit Quartic(double t)
      : v(t * t * (1 - t) * (1 - t)),
        d1(2 * t - 6 * t * t + 4 * t * t * t),
        d2(2 - 12 * t + 12 * t * t),
        d3(-12 + 24 * t) {}
};

}  // namespace

ManufacturedCase manufactured_2d(const ScaledParams& prm) {
  prm.validate();
  ManufacturedCase mc;
  mc.params = prm;
  const double R = prm.R, S = prm.S, p0 = 4.0 / (pi * pi);
  mc.u = [](const Point& x) {
    const Quartic a(x.x()), b(x.y());
    return Point(-a.v * b.d1, a.d1 * b.v);
  };
  mc.grad_u = [](const Point& x) {
    const Quartic a(x.x()), b(x.y());
    Mat2 g;
    g << -a.d1 * b.d1, -a.v * b.d2, a.d2 * b.v, a.d1 * b.d1;
    return g;
  };
  mc.p = [p0](const Point& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()) - p0; };
  mc.grad_p = [](const Point& x) {
    return Point(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()), pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
  };
  mc.w = [R, gp = mc.grad_p](const Point& x) { return Point(-R * gp(x)); };
  // f = -div eps(u) - lambda grad div u + grad p = -1/2 lap u + grad p for div u = 0
  mc.f = [gp = mc.grad_p](const Point& x) {
    const Quartic a(x.x()), b(x.y());
    const Point lap(-(a.d2 * b.d1 + a.v * b.d3), a.d3 * b.v + a.d1 * b.d2);
    return Point(-0.5 * lap + gp(x));
  };
  // g = -div u - div w - S p = R lap p - S p
  mc.g = [R, S, p = mc.p](const Point& x) {
    return -2 * pi * pi * R * std::sin(pi * x.x()) * std::sin(pi * x.y()) - S * p(x);
  };
  return mc;
}

namespace {

int error_degree(int l) { return std::min(kMaxQuadratureDegree, 2 * l + 8); }

}  // namespace

double max_divergence(const SpaceSet& s, const Vec& ubar, int degree) {
  const Mesh& m = *s.mesh;
  const RefTabulation tab(local_basis(Family::BDM, s.l), degree, 0);
  double mx = 0.0;
  for (int c = 0; c < m.num_cells(); ++c) {
    const Vec uc = s.U.gather(c, ubar);
    const auto vals = tab.tri_physical(affine_map(m, c));
    for (const auto& sv : vals) mx = std::max(mx, std::abs(sv.div.dot(uc)));
  }
  return mx;
}

ErrorRow compute_errors(const ManufacturedCase& mc, const SpaceSet& s, const StaticSolution& sol) {
  const Mesh& m = *s.mesh;
  const int deg = error_degree(s.l);
  const RefTabulation tu(local_basis(Family::BDM, s.l), deg, 0);
  const RefTabulation tw(local_basis(Family::RT, s.l - 1), deg, 0);
  const RefTabulation tp(local_basis(Family::PScalar, s.l - 1), deg, 0);
  const QuadRule& rule = tu.tri_rule();
  const double Rinv = 1.0 / mc.params.R;

  ErrorRow e;
  e.cells = m.num_cells();
  double gu = 0, uu = 0, gp = 0, pp = 0, fl = 0;
  for (int c = 0; c < m.num_cells(); ++c) {
    const AffineMap map = affine_map(m, c);
    e.h = std::max(e.h, m.cell_diameter(c));
    const Vec uc = s.U.gather(c, sol.ubar), wc = s.W.gather(c, sol.w), pc = s.P.gather(c, sol.p);
    const auto U = tu.tri_physical(map), W = tw.tri_physical(map), P = tp.tri_physical(map);
    for (int q = 0; q < rule.size(); ++q) {
      const double wq = rule.weights[q] * map.det;
      const Point x = map.to_physical(rule.points[q]);
      const Point uh = U[q].v.transpose() * uc;
      Mat2 guh = Mat2::Zero();
      for (int j = 0; j < uc.size(); ++j) guh += uc[j] * U[q].grad[j];
      const Point wh = W[q].v.transpose() * wc;
      const double ph = P[q].v.col(0).dot(pc);
      Point gph = Point::Zero();
      for (int j = 0; j < pc.size(); ++j) gph += pc[j] * P[q].grad[j].row(0).transpose();
      gu += wq * (mc.grad_u(x) - guh).squaredNorm();
      uu += wq * (mc.u(x) - uh).squaredNorm();
      gp += wq * (mc.grad_p(x) - gph).squaredNorm();
      pp += wq * std::pow(mc.p(x) - ph, 2);
      fl += wq * (mc.grad_p(x) + Rinv * wh).squaredNorm();
      e.div_max = std::max(e.div_max, std::abs(U[q].div.dot(uc)));
    }
  }
  e.grad_u = std::sqrt(gu);
  e.u = std::sqrt(uu);
  if (s.l > 1) e.grad_p = std::sqrt(gp);
  e.p = std::sqrt(pp);
  e.flux = std::sqrt(fl);

  const NormMatrices N = assemble_norm_matrices(s);
  const Vec dp = interpolate_scalar(m, s.P, mc.p) - sol.p;
  const Vec dh = interpolate_facet_scalar(m, s.Phat, mc.p) - sol.phat;
  e.p_proj = evaluate_norms(N, mc.params, Vec::Zero(sol.ubar.size()), Vec::Zero(sol.w.size()), dp, dh).pbar;
  return e;
}

double eoc(double coarse, double fine) { return std::log2(coarse / fine); }

TimeStepper::TimeStepper(const SpaceSet& s, const PhysicalParams& phys, SolveOptions opt)
    : s_(&s), phys_(phys), params_(scale_params(phys)), opt_(opt) {
  blocks_ = assemble_block_system(s, params_, Loads{});
  state_.ubar = Vec::Zero(blocks_.n_ubar());
  state_.w = Vec::Zero(blocks_.n_w());
  state_.p = Vec::Zero(blocks_.n_p());
  state_.phat = Vec::Zero(blocks_.n_phat());
}

void TimeStepper::set_initial(const VectorFn& u0, const ScalarFn& p0) {
  const Mesh& m = *s_->mesh;
  Vec ubar = Vec::Zero(blocks_.n_ubar());
  ubar.head(s_->U.ndof) = phys_.alpha * interpolate_vector(m, s_->U, u0);
  ubar.tail(s_->Uhat.ndof) = phys_.alpha * interpolate_facet_tangential(m, s_->Uhat, u0);
  const double ps = phys_.alpha * phys_.alpha / (2 * phys_.mu);
  set_state(ubar, ps * interpolate_scalar(m, s_->P, p0));
}

void TimeStepper::set_state(const Vec& ubar, const Vec& p) {
  state_.ubar = ubar;
  state_.p = p;
}

const StaticSolution& TimeStepper::step(const VectorFn& f_tilde, const ScalarFn& g_tilde) {
  // scaled loads: f = alpha f~ / (2 mu~); the mass row picks up the history terms
  const double fs = phys_.alpha / (2 * phys_.mu);
  Loads loads;
  if (f_tilde) loads.f = [&](const Point& x) { return Point(fs * f_tilde(x)); };
  if (g_tilde) loads.g = [&](const Point& x) { return -phys_.tau * g_tilde(x); };
  assemble_rhs(*s_, loads, blocks_.f, blocks_.g, blocks_.flux);
  // (g, q) = -tau (g~, q) - (div u_prev, q) - S (p_prev, q); B_u = -(div ., q), M_p = S mass
  blocks_.g += blocks_.B_u * state_.ubar - blocks_.M_p * state_.p;
  state_ = solve_static(blocks_, *s_, opt_);
  t_ += phys_.tau;
  ++k_;
  return state_;
}

}  // namespace hdgbiot
