#include "hdgbiot/biot.hpp"
#include "hdgbiot/cell_context.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace hdgbiot;
using std::numbers::pi;

namespace {

std::shared_ptr<const Mesh> square(int n) { return std::make_shared<const Mesh>(unit_square_mesh(n)); }

std::vector<Point> random_points(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.emplace_back(u(rng), u(rng));
  return pts;
}

// u from a finite-difference curl of the potential
Point fd_u(const Point& x) {
  auto phi = [](double a, double b) { return a * a * (1 - a) * (1 - a) * b * b * (1 - b) * (1 - b); };
  const double h = 1e-5;
  return Point(-(phi(x.x(), x.y() + h) - phi(x.x(), x.y() - h)) / (2 * h),
               (phi(x.x() + h, x.y()) - phi(x.x() - h, x.y())) / (2 * h));
}

}  // namespace

TEST(ScaleParams, Examples) {
  PhysicalParams a;
  a.mu = 0.5;
  const ScaledParams s = scale_params(a);
  EXPECT_DOUBLE_EQ(s.lambda, 0.0);
  EXPECT_DOUBLE_EQ(s.R, 1.0);
  EXPECT_DOUBLE_EQ(s.S, 0.0);

  PhysicalParams b;
  b.mu = 1;
  b.S0 = 1;
  b.lambda = 2;
  const ScaledParams t = scale_params(b);
  EXPECT_DOUBLE_EQ(t.lambda, 1.0);
  EXPECT_DOUBLE_EQ(t.R, 2.0);
  EXPECT_DOUBLE_EQ(t.S, 2.0);
  EXPECT_DOUBLE_EQ(t.gamma(), 3.0);

  b.tau *= 2;
  const ScaledParams r = scale_params(b);
  EXPECT_DOUBLE_EQ(r.R, 2 * t.R);
  EXPECT_DOUBLE_EQ(r.lambda, t.lambda);
  EXPECT_DOUBLE_EQ(r.S, t.S);
}

TEST(ScaleParams, RejectsInvalid) {
  PhysicalParams p;
  p.K = 0;
  EXPECT_THROW(scale_params(p), InvalidArgument);
  p = PhysicalParams{};
  p.S0 = -1;
  EXPECT_THROW(scale_params(p), InvalidArgument);
}

TEST(Manufactured, DisplacementIsDivergenceFree) {
  const auto mc = manufactured_2d(ScaledParams{});
  for (const Point& x : random_points(20, 5)) {
    EXPECT_NEAR(mc.grad_u(x).trace(), 0.0, 1e-13);
    EXPECT_LT((mc.u(x) - fd_u(x)).norm(), 1e-9);
  }
}

TEST(Manufactured, PressureHasZeroMean) {
  const auto mc = manufactured_2d(ScaledParams{});
  // tensor Gauss-Legendre, 40 points per direction
  const int n = 40;
  std::vector<double> xs(n), ws(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (z * p1 - p0) / (z * z - 1);
      z -= p1 / dp;
      if (it > 10) {
        xs[i] = 0.5 * (z + 1);
        ws[i] = 1.0 / ((1 - z * z) * dp * dp);
      }
    }
  }
  double mean = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) mean += ws[i] * ws[j] * mc.p(Point(xs[i], xs[j]));
  EXPECT_NEAR(mean, 0.0, 1e-13);
  EXPECT_NEAR(mc.p(Point(0.5, 0.5)), 1 - 4 / (pi * pi), 1e-15);
}

TEST(Manufactured, FluxVanishesAtCenter) {
  const auto mc = manufactured_2d(ScaledParams{});
  EXPECT_LT(mc.w(Point(0.5, 0.5)).norm(), 1e-15);
}

TEST(Manufactured, LoadsMatchFiniteDifferences) {
  ScaledParams prm;
  prm.lambda = 7;
  prm.R = 0.3;
  prm.S = 2;
  const auto mc = manufactured_2d(prm);
  const double h = 1e-4;
  const Point ex(h, 0), ey(0, h);
  for (const Point& x : random_points(20, 11)) {
    // f = -div eps(u) - lambda grad div u + grad p, all from second differences of u and p
    auto eps = [&](const Point& y) {
      const Mat2 g = mc.grad_u(y);
      return Mat2(0.5 * (g + g.transpose()));
    };
    auto div = [&](const Point& y) { return mc.grad_u(y).trace(); };
    const Point dive((eps(x + ex)(0, 0) - eps(x - ex)(0, 0) + eps(x + ey)(0, 1) - eps(x - ey)(0, 1)) / (2 * h),
                     (eps(x + ex)(1, 0) - eps(x - ex)(1, 0) + eps(x + ey)(1, 1) - eps(x - ey)(1, 1)) / (2 * h));
    const Point gdiv((div(x + ex) - div(x - ex)) / (2 * h), (div(x + ey) - div(x - ey)) / (2 * h));
    const Point gp((mc.p(x + ex) - mc.p(x - ex)) / (2 * h), (mc.p(x + ey) - mc.p(x - ey)) / (2 * h));
    const Point f = -dive - prm.lambda * gdiv + gp;
    EXPECT_LT((f - mc.f(x)).norm(), 1e-6);
    EXPECT_LT((mc.grad_p(x) - gp).norm(), 1e-6);
    // g = -div u - div w - S p with w = -R grad p
    const double divw = (mc.w(x + ex).x() - mc.w(x - ex).x() + mc.w(x + ey).y() - mc.w(x - ey).y()) / (2 * h);
    EXPECT_NEAR(-div(x) - divw - prm.S * mc.p(x), mc.g(x), 1e-6);
  }
}

TEST(Errors, EocDefinition) {
  EXPECT_DOUBLE_EQ(eoc(4.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(eoc(1.0, 1.0), 0.0);
}

class InterpolationVsSolve : public ::testing::TestWithParam<int> {};

TEST_P(InterpolationVsSolve, InterpolantErrorsAreSmaller) {
  const int l = GetParam();
  ScaledParams prm;
  prm.S = 2;
  const auto mc = manufactured_2d(prm);
  const SpaceSet s = build_spaces(square(4), l);
  const Mesh& m = *s.mesh;
  const BlockSystem b = assemble_block_system(s, prm, mc.loads());
  SolveOptions o;
  o.direct = true;
  const StaticSolution sol = solve_static(b, s, o);
  StaticSolution ip;
  ip.ubar = Vec::Zero(b.n_ubar());
  ip.ubar.head(s.U.ndof) = interpolate_vector(m, s.U, mc.u);
  ip.ubar.tail(s.Uhat.ndof) = interpolate_facet_tangential(m, s.Uhat, mc.u);
  ip.w = interpolate_vector(m, s.W, mc.w);
  ip.p = interpolate_scalar(m, s.P, mc.p);
  ip.phat = interpolate_facet_scalar(m, s.Phat, mc.p);
  const ErrorRow es = compute_errors(mc, s, sol), ei = compute_errors(mc, s, ip);
  EXPECT_LT(ei.u, es.u);
  EXPECT_LE(ei.p, es.p * (1 + 1e-12));
  // canonical interpolants are not best approximations in these two norms
  EXPECT_LT(ei.grad_u, 1.5 * es.grad_u);
  EXPECT_LT(ei.flux, 1.5 * es.flux);
  EXPECT_LT(ei.p_proj, 1e-12);
  EXPECT_LT(ei.div_max, 1e-12);
  EXPECT_EQ(std::isnan(es.grad_p), l == 1);
  EXPECT_EQ(es.cells, m.num_cells());
}

INSTANTIATE_TEST_SUITE_P(Orders, InterpolationVsSolve, ::testing::Values(1, 2, 3));

TEST(Errors, MassBalanceHoldsPointwise) {
  // div u_h + div w_h + S p_h = -Pi g at every point
  ScaledParams prm;
  prm.S = 0.7;
  const auto mc = manufactured_2d(prm);
  const SpaceSet s = build_spaces(square(3), 2);
  const BlockSystem b = assemble_block_system(s, prm, mc.loads());
  SolveOptions o;
  o.direct = true;
  const auto sol = solve_static(b, s, o);
  const Mesh& m = *s.mesh;
  const Vec pig = interpolate_scalar(m, s.P, mc.g);
  const RefTabulation tu(local_basis(Family::BDM, 2), 6, 0), tw(local_basis(Family::RT, 1), 6, 0),
      tp(local_basis(Family::PScalar, 1), 6, 0);
  double mx = 0;
  for (int c = 0; c < m.num_cells(); ++c) {
    const AffineMap map = affine_map(m, c);
    const auto U = tu.tri_physical(map), W = tw.tri_physical(map), P = tp.tri_physical(map);
    const Vec uc = s.U.gather(c, sol.ubar), wc = s.W.gather(c, sol.w), pc = s.P.gather(c, sol.p),
              gc = s.P.gather(c, pig);
    for (size_t q = 0; q < U.size(); ++q)
      mx = std::max(mx, std::abs(U[q].div.dot(uc) + W[q].div.dot(wc) + prm.S * P[q].v.col(0).dot(pc) +
                                 P[q].v.col(0).dot(gc)));
  }
  EXPECT_LT(mx, 1e-10);
}

TEST(TimeStepper, ZeroDataStaysZero) {
  const SpaceSet s = build_spaces(square(2), 1);
  TimeStepper ts(s, PhysicalParams{});
  for (int k = 0; k < 3; ++k) {
    const auto& st = ts.step(nullptr, nullptr);
    EXPECT_EQ(st.ubar.norm() + st.w.norm() + st.p.norm() + st.phat.norm(), 0.0);
  }
  EXPECT_EQ(ts.steps(), 3);
  EXPECT_DOUBLE_EQ(ts.time(), 3.0);
}

TEST(TimeStepper, SteadyStepMatchesStaticSolve) {
  PhysicalParams phys;  // mu = 1/2, alpha = 1, S0 = 0: scaled and physical variables coincide
  phys.lambda = 3;
  const ScaledParams prm = scale_params(phys);
  const auto mc = manufactured_2d(prm);
  const SpaceSet s = build_spaces(square(3), 2);
  SolveOptions o;
  o.direct = true;
  TimeStepper ts(s, phys, o);
  ts.set_initial(mc.u, mc.p);
  // the history term -div u_prev vanishes for the divergence-free interpolant
  const ScalarFn gt = [&](const Point& x) { return -mc.g(x); };
  const auto& st = ts.step(mc.f, gt);
  const auto ref = solve_static(assemble_block_system(s, prm, Loads{mc.f, mc.g, std::nullopt}), s, o);
  EXPECT_LT((st.ubar - ref.ubar).norm(), 1e-10 * ref.ubar.norm());
  EXPECT_LT((st.w - ref.w).norm(), 1e-10 * ref.w.norm());
  EXPECT_LT((st.p - ref.p).norm(), 1e-10 * ref.p.norm());
}

TEST(TimeStepper, HistoryTermsEnterMassRow) {
  // from a state (u0, p0) with zero loads the scaled mass row carries -div u0 - S p0
  PhysicalParams phys;
  phys.mu = 1.5;
  phys.alpha = 0.8;
  phys.S0 = 0.4;
  phys.tau = 0.25;
  const SpaceSet s = build_spaces(square(2), 2);
  SolveOptions o;
  o.direct = true;
  TimeStepper ts(s, phys, o);
  const VectorFn u0 = [](const Point& x) { return Point(x.x() * x.x(), x.x() * x.y()); };
  const ScalarFn p0 = [](const Point& x) { return 1 + x.y(); };
  ts.set_initial(u0, p0);
  const Vec ub0 = ts.state().ubar, pp0 = ts.state().p;
  const auto& st = ts.step(nullptr, nullptr);
  const ScaledParams prm = ts.scaled();
  BlockSystem b = assemble_block_system(s, prm, Loads{});
  // (g, q) = -(div u0, q) - S (p0, q) in scaled units
  const double ps = phys.alpha * phys.alpha / (2 * phys.mu);
  const Vec expect_p0 = ps * interpolate_scalar(*s.mesh, s.P, p0);
  EXPECT_LT((pp0 - expect_p0).norm(), 1e-13);
  b.g = b.B_u * ub0 - b.M_p * pp0;
  const auto ref = solve_static(b, s, o);
  EXPECT_LT((st.p - ref.p).norm(), 1e-12 * ref.p.norm());
  EXPECT_GT(ref.p.norm(), 0.0);
}

TEST(TimeStepper, PhysicalRoundTrip) {
  PhysicalParams phys;
  phys.mu = 2;
  phys.alpha = 3;
  phys.tau = 0.5;
  const SpaceSet s = build_spaces(square(2), 1);
  TimeStepper ts(s, phys);
  const VectorFn u0 = [](const Point& x) { return Point(std::sin(x.x()), x.y()); };
  const ScalarFn p0 = [](const Point& x) { return x.x() - x.y(); };
  ts.set_initial(u0, p0);
  const Vec ub = ts.state().ubar, p = ts.state().p;
  const Vec u_phys = ts.physical_u(), p_phys = ts.physical_p();
  ts.set_state(phys.alpha * u_phys, phys.alpha * phys.alpha / (2 * phys.mu) * p_phys);
  EXPECT_LT((ts.state().ubar - ub).norm(), 1e-14 * ub.norm());
  EXPECT_LT((ts.state().p - p).norm(), 1e-14 * p.norm());
  EXPECT_LT((p_phys - interpolate_scalar(*s.mesh, s.P, p0)).norm(), 1e-13);
}
