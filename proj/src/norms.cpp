#include "hdgbiot/norms.hpp"

#include "hdgbiot/cell_context.hpp"
#include "hdgbiot/polynomial.hpp"

#include <cmath>

namespace hdgbiot {

namespace {

double frob2(const Mat2& a, const Mat2& b) { return (a.array() * b.array()).sum(); }

SpMat build(int n, const Triplets& t) {
  SpMat A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  A.makeCompressed();
  return A;
}

struct Local {
  std::vector<int> ids;
  std::vector<double> signs;
  void append(const DofMap& m, int c, int offset) {
    for (size_t i = 0; i < m.dofs(c).size(); ++i) {
      const int d = m.dofs(c)[i];
      ids.push_back(d >= 0 ? d + offset : -1);
      signs.push_back(m.signs(c)[i]);
    }
  }
};

}  // namespace

double quad_form(const SpMat& A, const Vec& x) { return std::max(0.0, x.dot(A * x)); }

Vec stack(const Vec& a, const Vec& b) {
  Vec r(a.size() + b.size());
  r << a, b;
  return r;
}

NormMatrices assemble_norm_matrices(const SpaceSet& s) {
  const Mesh& m = *s.mesh;
  const int l = s.l;
  const LocalBasis& bu = local_basis(Family::BDM, l);
  const LocalBasis& bp = local_basis(Family::PScalar, l - 1);
  const RefTabulation tu(bu, form_degree(l), form_degree(l));
  const RefTabulation tp(bp, form_degree(l), form_degree(l));
  const int nU = bu.ndof, nh = l + 1, nuloc = nU + 3 * nh;
  const int nP = bp.ndof, nph = l, nploc = nP + 3 * nph;
  const int nubar = s.U.ndof + s.Uhat.ndof;
  Triplets th, td, tp_hdg;
  for (int c = 0; c < m.num_cells(); ++c) {
    const CellFrame cf = make_cell_frame(m, c);
    const double h = cf.h;
    Mat Ku = Mat::Zero(nuloc, nuloc), Kd = Mat::Zero(nuloc, nuloc), Kp = Mat::Zero(nploc, nploc);
    {
      const auto uv = tu.tri_physical(cf.map);
      const auto pv = tp.tri_physical(cf.map);
      const auto& tr = tu.tri_rule();
      for (int q = 0; q < tr.size(); ++q) {
        const double w = tr.weights[q] * cf.map.det;
        for (int i = 0; i < nU; ++i) {
          for (int j = 0; j < nU; ++j) {
            const double h2 = frob2(uv[q].hess[i][0], uv[q].hess[j][0]) + frob2(uv[q].hess[i][1], uv[q].hess[j][1]);
            Ku(i, j) += w * (frob2(uv[q].grad[i], uv[q].grad[j]) + h * h * h2);
            Kd(i, j) += w * uv[q].div[i] * uv[q].div[j];
          }
        }
        for (int i = 0; i < nP; ++i)
          for (int j = 0; j < nP; ++j)
            Kp(i, j) += w * (pv[q].grad[i].row(0).dot(pv[q].grad[j].row(0)) + h * h * frob2(pv[q].hess[i][0], pv[q].hess[j][0]));
      }
    }
    const auto& er = tu.edge_rule();
    for (int e = 0; e < 3; ++e) {
      const EdgeFrame& ef = cf.edges[e];
      const auto uv = tu.edge_physical(cf.map, e);
      const auto pv = tp.edge_physical(cf.map, e);
      Vec J(nuloc), Jp(nploc);
      for (int q = 0; q < er.size(); ++q) {
        const double w = er.weights[q] * ef.length / h;
        const double sg = global_facet_param(ef.ref, er.points[q].x());
        const Vec L = shifted_legendre(l, sg);
        J.setZero();
        Jp.setZero();
        for (int i = 0; i < nU; ++i) J[i] = -uv[q].v.row(i).dot(ef.t);
        for (int k = 0; k < nh; ++k) J[nU + e * nh + k] = L[k];
        for (int i = 0; i < nP; ++i) Jp[i] = -pv[q].v(i, 0);
        for (int k = 0; k < nph; ++k) Jp[nP + e * nph + k] = L[k];
        Ku.noalias() += w * J * J.transpose();
        Kp.noalias() += w * Jp * Jp.transpose();
      }
    }
    Local du, dp;
    du.append(s.U, c, 0);
    du.append(s.Uhat, c, s.U.ndof);
    dp.append(s.P, c, 0);
    dp.append(s.Phat, c, s.P.ndof);
    scatter(th, du.ids, du.signs, du.ids, du.signs, Ku);
    scatter(td, du.ids, du.signs, du.ids, du.signs, Kd);
    scatter(tp_hdg, dp.ids, dp.signs, dp.ids, dp.signs, Kp);
  }
  NormMatrices N;
  N.hdg_u = build(nubar, th);
  N.div_u = build(nubar, td);
  N.hdg_p = build(s.P.ndof + s.Phat.ndof, tp_hdg);
  N.w_l2 = assemble_mass(m, s.W, 1.0);
  N.p_l2 = assemble_mass(m, s.P, 1.0);
  return N;
}

NormValues evaluate_norms(const NormMatrices& N, const ScaledParams& p, const Vec& ubar, const Vec& w, const Vec& q,
                          const Vec& qhat) {
  NormValues v;
  const double hu = quad_form(N.hdg_u, ubar);
  v.hdg_u = std::sqrt(hu);
  v.ubar = std::sqrt(hu + p.lambda * quad_form(N.div_u, ubar));
  v.w_minus = std::sqrt(quad_form(N.w_l2, w) / p.R);
  const double hp = quad_form(N.hdg_p, stack(q, qhat));
  v.hdg_p = std::sqrt(hp);
  v.pbar = std::sqrt(p.R * hp + p.gamma() * quad_form(N.p_l2, q));
  return v;
}

}  // namespace hdgbiot
