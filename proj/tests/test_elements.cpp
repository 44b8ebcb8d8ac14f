#include "hdgbiot/elements.hpp"
#include "hdgbiot/polynomial.hpp"
#include "hdgbiot/quadrature.hpp"

#include <gtest/gtest.h>

using namespace hdgbiot;

TEST(Elements, Dimensions) {
  for (int l = 1; l <= 4; ++l) {
    EXPECT_EQ(local_basis(Family::BDM, l).ndof, (l + 1) * (l + 2));
    EXPECT_EQ(local_basis(Family::RT, l - 1).ndof, l * (l + 2));
    EXPECT_EQ(local_basis(Family::PScalar, l - 1).ndof, l * (l + 1) / 2);
    EXPECT_EQ(local_basis(Family::FacetTangential, l).ndof, l + 1);
    EXPECT_EQ(local_basis(Family::FacetScalar, l - 1).ndof, l);
  }
}

TEST(Elements, UnsupportedOrders) {
  EXPECT_THROW(build_local_basis(Family::BDM, 0), UnsupportedDegree);
  EXPECT_THROW(build_local_basis(Family::BDM, 5), UnsupportedDegree);
  EXPECT_THROW(build_local_basis(Family::RT, -1), UnsupportedDegree);
}

TEST(Elements, Bdm1AllEdgeMoments) {
  const auto& b = local_basis(Family::BDM, 1);
  EXPECT_EQ(b.ndof, 6);
  for (const auto& d : b.dofs) EXPECT_EQ(d.kind, DofKind::EdgeMoment);
}

TEST(Elements, DualBasis) {
  const std::pair<Family, int> cases[] = {
      {Family::BDM, 1}, {Family::BDM, 2}, {Family::BDM, 3}, {Family::BDM, 4},
      {Family::RT, 0}, {Family::RT, 1}, {Family::RT, 2}, {Family::RT, 3},
      {Family::PScalar, 0}, {Family::PScalar, 1}, {Family::PScalar, 2}, {Family::PScalar, 3},
      {Family::FacetTangential, 1}, {Family::FacetTangential, 4}, {Family::FacetScalar, 0}, {Family::FacetScalar, 3}};
  for (const auto& [f, k] : cases) {
    const auto& b = local_basis(f, k);
    const double r = (b.dual_matrix - Mat::Identity(b.ndof, b.ndof)).cwiseAbs().maxCoeff();
    EXPECT_LT(r, 1e-12) << family_name(f) << " " << k;
  }
}

// Oracle for the edge moments: apply the functional by direct quadrature of
// the evaluated basis, independent of the Vandermonde assembly.
TEST(Elements, EdgeMomentsByQuadrature) {
  for (int l = 1; l <= 4; ++l) {
    const auto& b = local_basis(Family::BDM, l);
    const auto& r = edge_rule(2 * l + 2);
    for (int i = 0; i < b.ndof; ++i) {
      const DofClass& di = b.dofs[i];
      if (di.kind != DofKind::EdgeMoment) continue;
      for (int j = 0; j < b.ndof; ++j) {
        double v = 0.0;
        for (int q = 0; q < r.size(); ++q) {
          const double s = r.points[q].x();
          const auto sv = b.eval(reference_edge_point(di.edge, s));
          v += r.weights[q] * sv.v.row(j).dot(reference_edge_normal(di.edge)) * shifted_legendre(di.moment, s)[di.moment];
        }
        EXPECT_NEAR(v, i == j ? 1.0 : 0.0, 1e-12);
      }
    }
  }
}

TEST(Elements, Rt0Properties) {
  const auto& b = local_basis(Family::RT, 0);
  EXPECT_EQ(b.ndof, 3);
  const Point pts[] = {Point(0.1, 0.2), Point(0.6, 0.3), Point(0.2, 0.7)};
  const auto s0 = b.eval(pts[0]);
  for (const auto& p : pts) {
    const auto sv = b.eval(p);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(sv.div[j], s0.div[j], 1e-13);
  }
  // constant normal trace on every edge
  for (int e = 0; e < 3; ++e) {
    const Point nu = reference_edge_normal(e);
    const auto a = b.eval(reference_edge_point(e, 0.1));
    const auto c = b.eval(reference_edge_point(e, 0.8));
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(a.v.row(j).dot(nu), c.v.row(j).dot(nu), 1e-13);
  }
}

TEST(Elements, P1ConstantGradient) {
  const auto& b = local_basis(Family::PScalar, 1);
  EXPECT_EQ(b.ndof, 3);
  const auto a = b.eval(Point(0.1, 0.1));
  const auto c = b.eval(Point(0.5, 0.3));
  for (int j = 0; j < 3; ++j) EXPECT_LT((a.grad[j].row(0) - c.grad[j].row(0)).norm(), 1e-13);
}

namespace {

// Least-squares fit residual of values onto polynomials of degree k along a
// parameter sampled at points s.
double poly_fit_residual(const std::vector<double>& s, const std::vector<double>& v, int k) {
  Mat A(s.size(), k + 1);
  Vec y(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    for (int p = 0; p <= k; ++p) A(i, p) = std::pow(s[i], p);
    y[i] = v[i];
  }
  const Vec c = A.colPivHouseholderQr().solve(y);
  return (A * c - y).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Elements, NormalTraceDegree) {
  for (int l = 1; l <= 4; ++l) {
    for (auto [fam, ord, deg] : {std::tuple{Family::BDM, l, l}, std::tuple{Family::RT, l - 1, l - 1}}) {
      const auto& b = local_basis(fam, ord);
      for (int e = 0; e < 3; ++e) {
        std::vector<double> s;
        for (int i = 0; i < 12; ++i) s.push_back(i / 11.0);
        for (int j = 0; j < b.ndof; ++j) {
          std::vector<double> v;
          for (double t : s) v.push_back(b.eval(reference_edge_point(e, t)).v.row(j).dot(reference_edge_normal(e)));
          EXPECT_LT(poly_fit_residual(s, v, deg), 1e-10) << family_name(fam) << ord;
        }
        // basis functions whose dof lives on another edge or inside have zero normal trace here
        for (int j = 0; j < b.ndof; ++j) {
          if (b.dofs[j].kind == DofKind::EdgeMoment && b.dofs[j].edge == e) continue;
          for (double t : s) EXPECT_NEAR(b.eval(reference_edge_point(e, t)).v.row(j).dot(reference_edge_normal(e)), 0.0, 1e-11);
        }
      }
    }
  }
}

// div BDM_l = P_{l-1}: the divergence of every basis function lies in
// P_{l-1} and the divergences span it.
TEST(Elements, BdmDivergenceOnto) {
  for (int l = 1; l <= 4; ++l) {
    const auto& b = local_basis(Family::BDM, l);
    const auto& r = triangle_rule(2 * l + 2);
    const int np = num_monomials(l - 1);
    Mat P(r.size(), np), D(r.size(), b.ndof);
    for (int q = 0; q < r.size(); ++q) {
      P.row(q) = eval_monomials(l - 1, r.points[q]).v.transpose();
      D.row(q) = b.eval(r.points[q]).div.transpose();
    }
    const Mat coeff = P.colPivHouseholderQr().solve(D);
    EXPECT_LT((P * coeff - D).cwiseAbs().maxCoeff(), 1e-10);
    Eigen::FullPivLU<Mat> lu(coeff);
    lu.setThreshold(1e-10);
    EXPECT_EQ(lu.rank(), np);
  }
}

TEST(Elements, FacetTangentialHasNoNormalComponent) {
  // u_hat = psi_k(s) t on a facet with tangent t; the normal component vanishes
  const auto& b = local_basis(Family::FacetTangential, 3);
  const Point t = Point(1.0, 2.0).normalized();
  const Point n(t.y(), -t.x());
  for (double s : {0.0, 0.3, 0.9}) {
    const Vec v = b.eval_facet(s);
    for (int k = 0; k < b.ndof; ++k) EXPECT_NEAR((v[k] * t).dot(n), 0.0, 1e-15);
  }
}

TEST(PushForward, Identity) {
  Mesh m({Point(0, 0), Point(1, 0), Point(0, 1)}, {{0, 1, 2}});
  const AffineMap a = affine_map(m, 0);
  for (auto f : {Family::BDM, Family::PScalar}) {
    const auto& b = local_basis(f, 2);
    const auto ref = b.eval(Point(0.2, 0.3));
    const auto phys = push_forward(b, a, ref);
    EXPECT_LT((phys.v - ref.v).cwiseAbs().maxCoeff(), 1e-15);
    for (int j = 0; j < b.ndof; ++j) EXPECT_LT((phys.grad[j] - ref.grad[j]).norm(), 1e-14);
  }
}

TEST(PushForward, UniformScaling) {
  const double s = 3.0;
  Mesh m({Point(0, 0), Point(s, 0), Point(0, s)}, {{0, 1, 2}});
  const AffineMap a = affine_map(m, 0);
  const auto& b = local_basis(Family::BDM, 2);
  const auto ref = b.eval(Point(0.2, 0.3));
  const auto phys = push_forward(b, a, ref);
  for (int j = 0; j < b.ndof; ++j) EXPECT_NEAR(phys.div[j], ref.div[j] / (s * s), 1e-14);
}

TEST(PushForward, EdgeMomentsPreserved) {
  Mesh m({Point(0.3, -0.2), Point(1.7, 0.4), Point(-0.1, 1.3)}, {{0, 1, 2}});
  const AffineMap a = affine_map(m, 0);
  for (int l = 1; l <= 3; ++l) {
    const auto& b = local_basis(Family::BDM, l);
    const auto& r = edge_rule(2 * l + 2);
    for (int e = 0; e < 3; ++e) {
      const Point pa = m.vertex((e + 1) % 3), pb = m.vertex((e + 2) % 3);
      const double len = (pb - pa).norm();
      const Point n = Point(pb.y() - pa.y(), -(pb.x() - pa.x())) / len;
      for (int k = 0; k <= l; ++k) {
        Vec mom = Vec::Zero(b.ndof);
        for (int q = 0; q < r.size(); ++q) {
          const double s = r.points[q].x();
          const auto phys = push_forward(b, a, b.eval(reference_edge_point(e, s)));
          mom += r.weights[q] * len * shifted_legendre(k, s)[k] * (phys.v * n);
        }
        for (int j = 0; j < b.ndof; ++j) {
          const bool own = b.dofs[j].kind == DofKind::EdgeMoment && b.dofs[j].edge == e && b.dofs[j].moment == k;
          EXPECT_NEAR(mom[j], own ? 1.0 : 0.0, 1e-12);
        }
      }
    }
  }
}

TEST(PushForward, GradientAndHessianMatchFiniteDifferences) {
  Mesh m({Point(0.3, -0.2), Point(1.7, 0.4), Point(-0.1, 1.3)}, {{0, 1, 2}});
  const AffineMap a = affine_map(m, 0);
  for (auto f : {Family::BDM, Family::PScalar}) {
    const auto& b = local_basis(f, 3);
    const Point x = a.to_physical(Point(0.25, 0.35));
    const double h = 1e-5;
    auto at = [&](const Point& y) { return push_forward(b, a, b.eval(a.to_reference(y))); };
    const auto c = at(x);
    for (int d = 0; d < 2; ++d) {
      Point dx = Point::Zero();
      dx[d] = h;
      const auto p = at(x + dx), mn = at(x - dx);
      for (int j = 0; j < b.ndof; ++j) {
        for (int comp = 0; comp < b.ncomp; ++comp) {
          EXPECT_NEAR((p.v(j, comp) - mn.v(j, comp)) / (2 * h), c.grad[j](comp, d), 1e-7);
          const Point dg = (p.grad[j].row(comp) - mn.grad[j].row(comp)).transpose() / (2 * h);
          EXPECT_LT((dg - c.hess[j][comp].col(d)).norm(), 1e-6);
        }
      }
    }
  }
}
