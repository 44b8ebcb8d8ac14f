#include "hdgbiot/darcy.hpp"

#include "hdgbiot/sparse_direct.hpp"

#include <cmath>
#include <numbers>

namespace hdgbiot {

using std::numbers::pi;

DarcyCase darcy_manufactured() {
  DarcyCase d;
  d.p = [](const Point& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };
  d.w = [](const Point& x) {
    return Point(-pi * std::cos(pi * x.x()) * std::sin(pi * x.y()), -pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
  };
  d.g = [](const Point& x) { return 2 * pi * pi * std::sin(pi * x.x()) * std::sin(pi * x.y()); };
  return d;
}

long clique_nonzeros(int n, const std::vector<std::vector<int>>& sets) {
  Triplets t;
  for (const auto& s : sets)
    for (int i : s)
      for (int j : s)
        if (i >= 0 && j >= 0) t.emplace_back(i, j, 1.0);
  SpMat A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  return A.nonZeros();
}

namespace {

Vec local_stack(const Mesh& m, const DofMap& map, const Vec& x) {
  Vec out(m.num_cells() * map.local_size);
  for (int c = 0; c < m.num_cells(); ++c) out.segment(c * map.local_size, map.local_size) = map.gather(c, x);
  return out;
}

// Spaces of the order-(k+1) scheme carry RT_k, P_k and P_k(F); the displacement
// spaces are emptied so that the Biot condensation reduces to the Darcy one.
SpaceSet darcy_spaces(std::shared_ptr<const Mesh> mesh, int k, bool conforming) {
  if (k < 0 || k > 3) throw UnsupportedDegree("darcy: k must be in [0, 3]");
  SpaceSet s = build_spaces(mesh, k + 1);
  s.U = DofMap{};
  s.Uhat = DofMap{};
  if (conforming) s.W = build_hdiv_map(*mesh, Family::RT, k, false, false, "W");
  s.Phat = build_facet_map(*mesh, Family::FacetScalar, k, true, "Phat");
  return s;
}

Vec load_vector(const SpaceSet& s, const DarcyCase& dc) {
  Vec f, g, flux;
  // -(div w, q) = -(g, q)
  assemble_rhs(s, Loads{nullptr, [&](const Point& x) { return -dc.g(x); }, std::nullopt}, f, g, flux);
  return g;
}

}  // namespace

DarcySolution solve_darcy_mixed(std::shared_ptr<const Mesh> mesh, int k, const DarcyCase& dc) {
  const SpaceSet s = darcy_spaces(mesh, k, true);
  const Mesh& m = *mesh;
  SpMat Bw, Bh;
  assemble_b_form(s, Bw, Bh);
  const SpMat Mw = assemble_mass(m, s.W, 1.0);
  const int nw = s.W.ndof, np = s.P.ndof;
  Triplets t;
  for (int j = 0; j < Mw.outerSize(); ++j)
    for (SpMat::InnerIterator it(Mw, j); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (int j = 0; j < Bw.outerSize(); ++j)
    for (SpMat::InnerIterator it(Bw, j); it; ++it) {
      t.emplace_back(nw + it.row(), it.col(), it.value());
      t.emplace_back(it.col(), nw + it.row(), it.value());
    }
  SpMat K(nw + np, nw + np);
  K.setFromTriplets(t.begin(), t.end());
  Vec rhs = Vec::Zero(nw + np);
  rhs.tail(np) = load_vector(s, dc);
  const Vec x = solve_direct(K, rhs);

  DarcySolution sol;
  sol.method = "M";
  sol.k = k;
  sol.w = local_stack(m, s.W, x.head(nw));
  sol.p = x.tail(np);
  sol.dof = nw + np;
  // static condensation keeps facet moments and the cell-wise constant pressure
  const LocalBasis& bw = local_basis(Family::RT, k);
  std::vector<std::vector<int>> sets(m.num_cells());
  std::vector<char> coupling(nw + np, 0);
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto d = s.W.dofs(c);
    for (int i = 0; i < bw.ndof; ++i)
      if (bw.dofs[i].kind == DofKind::EdgeMoment) sets[c].push_back(d[i]);
    sets[c].push_back(nw + s.P.dofs(c)[0]);
    for (int i : sets[c]) coupling[i] = 1;
  }
  sol.cdof = 0;
  for (char c : coupling) sol.cdof += c;
  sol.nze = clique_nonzeros(nw + np, sets);
  return sol;
}

DarcySolution solve_darcy_hybrid(std::shared_ptr<const Mesh> mesh, int k, const DarcyCase& dc) {
  const SpaceSet s = darcy_spaces(mesh, k, false);
  const Mesh& m = *mesh;
  BlockSystem b;
  b.params.R = 1.0;
  b.params.S = 0.0;
  assemble_b_form(s, b.B_w, b.Bhat_w);
  b.M_w = assemble_mass(m, s.W, 1.0);
  b.M_p = SpMat(s.P.ndof, s.P.ndof);
  b.A_ubar = SpMat(0, 0);
  b.B_u = SpMat(s.P.ndof, 0);
  b.A_phat = SpMat(s.Phat.ndof, s.Phat.ndof);
  b.f = Vec(0);
  b.g = load_vector(s, dc);
  b.flux = Vec::Zero(s.Phat.ndof);

  const CondensedSystem cs = condense(b, s);
  // the reduced operator is -C with C SPD
  SpdSolver chol;
  chol.compute(cs.C, "hybrid mixed Darcy");
  const Vec r = cs.reduce_rhs(b.f, b.g, b.flux);
  const Vec phat = chol.solve(-r);
  Vec w, p;
  cs.recover(phat, b.g, w, p);

  DarcySolution sol;
  sol.method = "HM";
  sol.k = k;
  sol.w = local_stack(m, s.W, w);
  sol.p = p;
  sol.phat = phat;
  sol.dof = s.W.ndof + s.P.ndof + s.Phat.ndof;
  sol.cdof = s.Phat.ndof;
  std::vector<std::vector<int>> sets(m.num_cells());
  for (int c = 0; c < m.num_cells(); ++c)
    for (int i : s.Phat.dofs(c))
      if (i >= 0) sets[c].push_back(i);
  sol.nze = clique_nonzeros(s.Phat.ndof, sets);
  sol.jump_max = (b.Bhat_w * w).cwiseAbs().maxCoeff();
  return sol;
}

}  // namespace hdgbiot
