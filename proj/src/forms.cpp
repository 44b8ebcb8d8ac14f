#include "hdgbiot/forms.hpp"

#include "hdgbiot/cell_context.hpp"
#include "hdgbiot/polynomial.hpp"

#include <algorithm>
#include <ostream>

namespace hdgbiot {

void ScaledParams::validate() const {
  if (!(R > 0.0)) throw InvalidArgument("R must be positive");
  if (!(S >= 0.0)) throw InvalidArgument("S must be non-negative");
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be non-negative");
  if (!(eta > 0.0) || !(eta_p > 0.0)) throw InvalidArgument("stabilization parameters must be positive");
}

namespace {

int rhs_degree(int l) { return std::min(kMaxQuadratureDegree, 2 * l + 8); }

SpMat from_triplets(int rows, int cols, const Triplets& t) {
  SpMat A(rows, cols);
  A.setFromTriplets(t.begin(), t.end());
  A.makeCompressed();
  return A;
}

// Concatenated local->global map of several spaces on one cell.
struct LocalDofs {
  std::vector<int> ids;
  std::vector<double> signs;

  void append(const DofMap& m, int c, int offset) {
    const auto d = m.dofs(c);
    const auto s = m.signs(c);
    for (size_t i = 0; i < d.size(); ++i) {
      ids.push_back(d[i] >= 0 ? d[i] + offset : -1);
      signs.push_back(s[i]);
    }
  }
};

void add_local(Triplets& t, const LocalDofs& r, const LocalDofs& c, const Mat& K) {
  scatter(t, r.ids, r.signs, c.ids, c.signs, K);
}

double ddot(const Mat2& a, const Mat2& b) { return (a.array() * b.array()).sum(); }

}  // namespace

SpMat assemble_hdg_elasticity(const SpaceSet& s, const ScaledParams& p) {
  const Mesh& m = *s.mesh;
  const int l = s.l;
  const LocalBasis& bu = local_basis(Family::BDM, l);
  const RefTabulation tu(bu, form_degree(l), form_degree(l));
  const int nU = bu.ndof;
  const int nh = l + 1;
  const int nloc = nU + 3 * nh;
  const int nubar = s.U.ndof + s.Uhat.ndof;
  Triplets trip;
  for (int c = 0; c < m.num_cells(); ++c) {
    const CellFrame cf = make_cell_frame(m, c);
    Mat K = Mat::Zero(nloc, nloc);
    const auto vals = tu.tri_physical(cf.map);
    const auto& tr = tu.tri_rule();
    for (int q = 0; q < tr.size(); ++q) {
      const double w = tr.weights[q] * cf.map.det;
      const auto& sv = vals[q];
      for (int i = 0; i < nU; ++i) {
        const Mat2 ei = sym(sv.grad[i]);
        for (int j = 0; j < nU; ++j) K(i, j) += w * (ddot(ei, sym(sv.grad[j])) + p.lambda * sv.div[i] * sv.div[j]);
      }
    }
    const double pen = p.eta * l * l / cf.h;
    const auto& er = tu.edge_rule();
    for (int e = 0; e < 3; ++e) {
      const EdgeFrame& ef = cf.edges[e];
      const auto ev = tu.edge_physical(cf.map, e);
      Vec J(nloc), F(nloc);
      for (int q = 0; q < er.size(); ++q) {
        const double sh = er.points[q].x();
        const double w = er.weights[q] * ef.length;
        const Vec L = shifted_legendre(l, global_facet_param(ef.ref, sh));
        J.setZero();
        F.setZero();
        for (int i = 0; i < nU; ++i) {
          J[i] = -ev[q].v.row(i).dot(ef.t);
          F[i] = (sym(ev[q].grad[i]) * ef.n_out).dot(ef.t);
        }
        for (int k = 0; k < nh; ++k) J[nU + e * nh + k] = L[k];
        K.noalias() += w * (J * F.transpose() + F * J.transpose() + pen * J * J.transpose());
      }
    }
    LocalDofs d;
    d.append(s.U, c, 0);
    d.append(s.Uhat, c, s.U.ndof);
    add_local(trip, d, d, K);
  }
  return from_triplets(nubar, nubar, trip);
}

SpMat assemble_dg_elasticity(const Mesh& m, const DofMap& U, int l, const ScaledParams& p) {
  const LocalBasis& bu = local_basis(U.family, U.order);
  const RefTabulation tu(bu, form_degree(l), form_degree(l));
  const int nU = bu.ndof;
  Triplets trip;
  for (int c = 0; c < m.num_cells(); ++c) {
    const AffineMap map = affine_map(m, c);
    Mat K = Mat::Zero(nU, nU);
    const auto vals = tu.tri_physical(map);
    const auto& tr = tu.tri_rule();
    for (int q = 0; q < tr.size(); ++q) {
      const double w = tr.weights[q] * map.det;
      const auto& sv = vals[q];
      for (int i = 0; i < nU; ++i) {
        const Mat2 ei = sym(sv.grad[i]);
        for (int j = 0; j < nU; ++j) K(i, j) += w * (ddot(ei, sym(sv.grad[j])) + p.lambda * sv.div[i] * sv.div[j]);
      }
    }
    LocalDofs d;
    d.append(U, c, 0);
    add_local(trip, d, d, K);
  }
  const auto& er = tu.edge_rule();
  const int nq = er.size();
  for (int f = 0; f < m.num_facets(); ++f) {
    const auto& fc = m.facet_cells(f);
    const bool bnd = m.is_boundary(f);
    const int nside = bnd ? 1 : 2;
    const Point n = m.facet_normal(f);
    const Point t = m.facet_tangent(f);
    const double len = m.facet_length(f);
    const double pen = p.eta * l * l / len;
    std::vector<std::vector<ShapeValues>> side_vals(nside);
    LocalDofs d;
    for (int k = 0; k < nside; ++k) {
      const int c = fc[k];
      const int e = m.local_facet_index(c, f);
      side_vals[k] = tu.edge_physical(affine_map(m, c), e);
      d.append(U, c, 0);
    }
    const bool rev[2] = {m.cell_facets(fc[0])[m.local_facet_index(fc[0], f)].reversed,
                         bnd ? false : m.cell_facets(fc[1])[m.local_facet_index(fc[1], f)].reversed};
    const int nloc = nside * nU;
    Mat K = Mat::Zero(nloc, nloc);
    Vec jump(nloc), avg(nloc);
    for (int q = 0; q < nq; ++q) {
      // global parameter of point q; Gauss rules are symmetric so the
      // reversed local index is nq-1-q
      const double w = er.weights[q] * len;
      for (int k = 0; k < nside; ++k) {
        const int ql = rev[k] ? nq - 1 - q : q;
        const auto& sv = side_vals[k][ql];
        const double js = k == 0 ? 1.0 : -1.0;
        const double af = bnd ? 1.0 : 0.5;
        for (int i = 0; i < nU; ++i) {
          jump[k * nU + i] = js * sv.v.row(i).dot(t);
          avg[k * nU + i] = af * (sym(sv.grad[i]) * n).dot(t);
        }
      }
      K.noalias() += w * (pen * jump * jump.transpose() - jump * avg.transpose() - avg * jump.transpose());
    }
    add_local(trip, d, d, K);
  }
  return from_triplets(U.ndof, U.ndof, trip);
}

void assemble_b_form(const SpaceSet& s, SpMat& B_w, SpMat& Bhat_w) {
  const Mesh& m = *s.mesh;
  const int l = s.l;
  const LocalBasis& bw = local_basis(Family::RT, l - 1);
  const LocalBasis& bp = local_basis(Family::PScalar, l - 1);
  const RefTabulation tw(bw, form_degree(l), form_degree(l));
  const RefTabulation tp(bp, form_degree(l), form_degree(l));
  const int nW = bw.ndof, nP = bp.ndof, nph = l;
  Triplets tb, th;
  for (int c = 0; c < m.num_cells(); ++c) {
    const CellFrame cf = make_cell_frame(m, c);
    Mat Bl = Mat::Zero(nP, nW), Bh = Mat::Zero(3 * nph, nW);
    const auto wv = tw.tri_physical(cf.map);
    const auto pv = tp.tri_physical(cf.map);
    const auto& tr = tw.tri_rule();
    for (int q = 0; q < tr.size(); ++q) {
      const double w = tr.weights[q] * cf.map.det;
      Bl.noalias() -= w * pv[q].v.col(0) * wv[q].div.transpose();
    }
    const auto& er = tw.edge_rule();
    for (int e = 0; e < 3; ++e) {
      const EdgeFrame& ef = cf.edges[e];
      const auto ev = tw.edge_physical(cf.map, e);
      for (int q = 0; q < er.size(); ++q) {
        const double w = er.weights[q] * ef.length;
        const Vec L = shifted_legendre(l - 1, global_facet_param(ef.ref, er.points[q].x()));
        const Vec wn = ev[q].v * ef.n_out;
        Bh.middleRows(e * nph, nph).noalias() += w * L * wn.transpose();
      }
    }
    LocalDofs dp, dw, dh;
    dp.append(s.P, c, 0);
    dw.append(s.W, c, 0);
    dh.append(s.Phat, c, 0);
    add_local(tb, dp, dw, Bl);
    add_local(th, dh, dw, Bh);
  }
  B_w = from_triplets(s.P.ndof, s.W.ndof, tb);
  Bhat_w = from_triplets(s.Phat.ndof, s.W.ndof, th);
}

SpMat assemble_mass(const Mesh& m, const DofMap& map, double weight) {
  const LocalBasis& b = local_basis(map.family, map.order);
  const RefTabulation tb(b, 2 * b.degree + 2, 0);
  Triplets t;
  for (int c = 0; c < m.num_cells(); ++c) {
    const AffineMap A = affine_map(m, c);
    const auto v = tb.tri_physical(A);
    const auto& tr = tb.tri_rule();
    Mat K = Mat::Zero(b.ndof, b.ndof);
    for (int q = 0; q < tr.size(); ++q) K.noalias() += tr.weights[q] * A.det * v[q].v * v[q].v.transpose();
    LocalDofs d;
    d.append(map, c, 0);
    add_local(t, d, d, weight * K);
  }
  return from_triplets(map.ndof, map.ndof, t);
}

void assemble_masses(const SpaceSet& s, const ScaledParams& p, SpMat& M_w, SpMat& M_p, SpMat& Mt_p) {
  p.validate();
  const Mesh& m = *s.mesh;
  M_w = assemble_mass(m, s.W, 1.0 / p.R);
  const SpMat mp = assemble_mass(m, s.P, 1.0);
  M_p = p.S * mp;
  Mt_p = p.gamma() * mp;
}

SpMat assemble_div_coupling(const SpaceSet& s) {
  const Mesh& m = *s.mesh;
  const int l = s.l;
  const LocalBasis& bu = local_basis(Family::BDM, l);
  const LocalBasis& bp = local_basis(Family::PScalar, l - 1);
  const RefTabulation tu(bu, form_degree(l), 0);
  const RefTabulation tp(bp, form_degree(l), 0);
  Triplets t;
  for (int c = 0; c < m.num_cells(); ++c) {
    const AffineMap A = affine_map(m, c);
    const auto uv = tu.tri_physical(A);
    const auto pv = tp.tri_physical(A);
    const auto& tr = tu.tri_rule();
    Mat K = Mat::Zero(bp.ndof, bu.ndof);
    for (int q = 0; q < tr.size(); ++q) K.noalias() -= tr.weights[q] * A.det * pv[q].v.col(0) * uv[q].div.transpose();
    LocalDofs dp, du;
    dp.append(s.P, c, 0);
    du.append(s.U, c, 0);
    add_local(t, dp, du, K);
  }
  return from_triplets(s.P.ndof, s.U.ndof + s.Uhat.ndof, t);
}

void assemble_pressure_hdg_laplacian(const SpaceSet& s, const ScaledParams& p, SpMat& A_p, SpMat& B_p, SpMat& A_phat) {
  p.validate();
  const Mesh& m = *s.mesh;
  const int l = s.l;
  const LocalBasis& bp = local_basis(Family::PScalar, l - 1);
  const RefTabulation tp(bp, form_degree(l), form_degree(l));
  const int nP = bp.ndof, nph = l;
  Triplets ta, tb, th;
  for (int c = 0; c < m.num_cells(); ++c) {
    const CellFrame cf = make_cell_frame(m, c);
    Mat Ap = Mat::Zero(nP, nP), Bp = Mat::Zero(3 * nph, nP), Ah = Mat::Zero(3 * nph, 3 * nph);
    const auto pv = tp.tri_physical(cf.map);
    const auto& tr = tp.tri_rule();
    for (int q = 0; q < tr.size(); ++q) {
      const double w = tr.weights[q] * cf.map.det;
      for (int i = 0; i < nP; ++i)
        for (int j = 0; j < nP; ++j) Ap(i, j) += w * pv[q].grad[i].row(0).dot(pv[q].grad[j].row(0));
    }
    const double pen = p.eta_p * l * l / cf.h;
    const auto& er = tp.edge_rule();
    for (int e = 0; e < 3; ++e) {
      const EdgeFrame& ef = cf.edges[e];
      const auto ev = tp.edge_physical(cf.map, e);
      for (int q = 0; q < er.size(); ++q) {
        const double w = er.weights[q] * ef.length;
        const Vec L = shifted_legendre(l - 1, global_facet_param(ef.ref, er.points[q].x()));
        const Vec phi = ev[q].v.col(0);
        Vec dn(nP);
        for (int j = 0; j < nP; ++j) dn[j] = ev[q].grad[j].row(0).dot(ef.n_out);
        Ap.noalias() += w * (pen * phi * phi.transpose() - phi * dn.transpose() - dn * phi.transpose());
        Bp.middleRows(e * nph, nph).noalias() += w * L * (dn - pen * phi).transpose();
        Ah.block(e * nph, e * nph, nph, nph).noalias() += w * pen * L * L.transpose();
      }
    }
    LocalDofs dp, dh;
    dp.append(s.P, c, 0);
    dh.append(s.Phat, c, 0);
    add_local(ta, dp, dp, p.R * Ap);
    add_local(tb, dh, dp, p.R * Bp);
    add_local(th, dh, dh, p.R * Ah);
  }
  A_p = from_triplets(s.P.ndof, s.P.ndof, ta);
  B_p = from_triplets(s.Phat.ndof, s.P.ndof, tb);
  A_phat = from_triplets(s.Phat.ndof, s.Phat.ndof, th);
}

void assemble_rhs(const SpaceSet& s, const Loads& loads, Vec& f_h, Vec& g_h, Vec& flux_h) {
  const Mesh& m = *s.mesh;
  const int l = s.l;
  const int deg = rhs_degree(l);
  const LocalBasis& bu = local_basis(Family::BDM, l);
  const LocalBasis& bp = local_basis(Family::PScalar, l - 1);
  const RefTabulation tu(bu, deg, deg);
  const RefTabulation tp(bp, deg, 0);
  f_h = Vec::Zero(s.U.ndof + s.Uhat.ndof);
  g_h = Vec::Zero(s.P.ndof);
  flux_h = Vec::Zero(s.Phat.ndof);
  for (int c = 0; c < m.num_cells(); ++c) {
    const CellFrame cf = make_cell_frame(m, c);
    const auto& tr = tu.tri_rule();
    Vec fl = Vec::Zero(bu.ndof), gl = Vec::Zero(bp.ndof);
    const bool have_f = static_cast<bool>(loads.f), have_g = static_cast<bool>(loads.g);
    const auto uv = have_f ? tu.tri_physical(cf.map) : std::vector<ShapeValues>{};
    const auto pv = have_g ? tp.tri_physical(cf.map) : std::vector<ShapeValues>{};
    for (int q = 0; q < tr.size(); ++q) {
      const double w = tr.weights[q] * cf.map.det;
      const Point x = cf.map.to_physical(tr.points[q]);
      if (have_f) fl.noalias() += w * (uv[q].v * loads.f(x));
      if (have_g) gl.noalias() += w * loads.g(x) * pv[q].v.col(0);
    }
    if (have_f && s.U.local_size == bu.ndof) {
      const auto du = s.U.dofs(c);
      const auto su = s.U.signs(c);
      for (int i = 0; i < bu.ndof; ++i)
        if (du[i] >= 0) f_h[du[i]] += su[i] * fl[i];
    }
    const auto dp = s.P.dofs(c);
    for (int i = 0; i < bp.ndof; ++i) g_h[dp[i]] += gl[i];

    if (loads.w_boundary) {
      const auto& er = tu.edge_rule();
      for (int e = 0; e < 3; ++e) {
        const EdgeFrame& ef = cf.edges[e];
        if (!ef.boundary) continue;
        const auto dh = s.Phat.dofs_on_facet(ef.facet);
        for (int q = 0; q < er.size(); ++q) {
          const double sh = er.points[q].x();
          const double w = er.weights[q] * ef.length;
          const Vec L = shifted_legendre(l - 1, global_facet_param(ef.ref, sh));
          const double wn = (*loads.w_boundary)(cf.edge_point(e, sh)).dot(ef.n_out);
          for (int k = 0; k < l; ++k)
            if (dh[k] >= 0) flux_h[dh[k]] += w * wn * L[k];
        }
      }
    }
  }
}

BlockSystem assemble_block_system(const SpaceSet& s, const ScaledParams& p, const Loads& loads) {
  p.validate();
  BlockSystem b;
  b.params = p;
  b.A_ubar = assemble_hdg_elasticity(s, p);
  b.B_u = assemble_div_coupling(s);
  assemble_masses(s, p, b.M_w, b.M_p, b.Mt_p);
  assemble_b_form(s, b.B_w, b.Bhat_w);
  assemble_pressure_hdg_laplacian(s, p, b.A_p, b.B_p, b.A_phat);
  assemble_rhs(s, loads, b.f, b.g, b.flux);
  return b;
}

namespace {

void add_block(Triplets& t, const SpMat& A, int ro, int co, bool transpose, double scale) {
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      const int r = transpose ? it.col() : it.row();
      const int c = transpose ? it.row() : it.col();
      t.emplace_back(r + ro, c + co, scale * it.value());
    }
  }
}

}  // namespace

SpMat full_operator(const BlockSystem& b) {
  const int ou = 0, ow = b.n_ubar(), op = ow + b.n_w(), oh = op + b.n_p();
  const int n = b.n_total();
  Triplets t;
  add_block(t, b.A_ubar, ou, ou, false, 1.0);
  add_block(t, b.B_u, op, ou, false, 1.0);
  add_block(t, b.B_u, ou, op, true, 1.0);
  add_block(t, b.M_w, ow, ow, false, 1.0);
  add_block(t, b.B_w, op, ow, false, 1.0);
  add_block(t, b.B_w, ow, op, true, 1.0);
  add_block(t, b.Bhat_w, oh, ow, false, 1.0);
  add_block(t, b.Bhat_w, ow, oh, true, 1.0);
  add_block(t, b.M_p, op, op, false, -1.0);
  return from_triplets(n, n, t);
}

Vec full_rhs(const BlockSystem& b) {
  Vec r = Vec::Zero(b.n_total());
  r.head(b.n_ubar()) = b.f;
  r.segment(b.n_ubar() + b.n_w(), b.n_p()) = b.g;
  r.tail(b.n_phat()) = b.flux;
  return r;
}

void write_coo(std::ostream& os, const SpMat& A) {
  os.precision(17);
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

double symmetry_defect(const SpMat& A) {
  const SpMat At = A.transpose();
  const SpMat D = A - At;
  double dmax = 0.0, amax = 0.0;
  for (int k = 0; k < D.outerSize(); ++k)
    for (SpMat::InnerIterator it(D, k); it; ++it) dmax = std::max(dmax, std::abs(it.value()));
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) amax = std::max(amax, std::abs(it.value()));
  return amax > 0.0 ? dmax / amax : 0.0;
}

}  // namespace hdgbiot
