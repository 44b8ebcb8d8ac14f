#include "hdgbiot/spaces.hpp"

#include "hdgbiot/polynomial.hpp"
#include "hdgbiot/quadrature.hpp"

#include <algorithm>

namespace hdgbiot {

namespace {

constexpr int kInterpExtraDegree = 16;

int interp_degree(int d) { return std::min(kMaxQuadratureDegree, 2 * d + kInterpExtraDegree); }

}  // namespace

int DofMap::num_coupling() const {
  return static_cast<int>(std::count(role.begin(), role.end(), DofRole::Coupling));
}

Vec DofMap::gather(int c, const Vec& x) const {
  Vec out(local_size);
  const auto d = dofs(c);
  const auto s = signs(c);
  for (int i = 0; i < local_size; ++i) out[i] = d[i] >= 0 ? s[i] * x[d[i]] : 0.0;
  return out;
}

DofMap build_hdiv_map(const Mesh& m, Family family, int order, bool broken, bool constrain_boundary,
                      std::string name) {
  if (family != Family::BDM && family != Family::RT) throw InvalidArgument("build_hdiv_map: not an H(div) family");
  const LocalBasis& b = local_basis(family, order);
  DofMap map;
  map.name = std::move(name);
  map.family = family;
  map.order = order;
  map.local_size = b.ndof;
  const int nc = m.num_cells();
  map.cell_dofs.assign(size_t(nc) * b.ndof, -1);
  map.cell_signs.assign(size_t(nc) * b.ndof, 1.0);

  if (broken) {
    map.ndof = nc * b.ndof;
    for (int i = 0; i < map.ndof; ++i) map.cell_dofs[i] = i;
    map.role.assign(map.ndof, DofRole::Local);
    return map;
  }

  const int pe = b.edge_moments;
  map.per_facet = pe;
  map.facet_dofs.assign(size_t(m.num_facets()) * pe, -1);
  int next = 0;
  for (int f = 0; f < m.num_facets(); ++f) {
    if (constrain_boundary && m.is_boundary(f)) {
      map.num_constrained += pe;
      continue;
    }
    for (int k = 0; k < pe; ++k) map.facet_dofs[f * pe + k] = next++;
  }
  const int n_facet_dofs = next;
  for (int c = 0; c < nc; ++c) {
    const auto& refs = m.cell_facets(c);
    for (int i = 0; i < b.ndof; ++i) {
      const DofClass& dc = b.dofs[i];
      const int slot = c * b.ndof + i;
      if (dc.kind == DofKind::EdgeMoment) {
        const FacetRef& r = refs[dc.edge];
        map.cell_dofs[slot] = map.facet_dofs[r.facet * pe + dc.moment];
        map.cell_signs[slot] = r.sign * ((r.reversed && dc.moment % 2 == 1) ? -1.0 : 1.0);
      } else {
        map.cell_dofs[slot] = next++;
      }
    }
  }
  map.ndof = next;
  map.role.assign(map.ndof, DofRole::Coupling);
  (void)n_facet_dofs;
  return map;
}

DofMap build_scalar_map(const Mesh& m, int order, std::string name) {
  const LocalBasis& b = local_basis(Family::PScalar, order);
  DofMap map;
  map.name = std::move(name);
  map.family = Family::PScalar;
  map.order = order;
  map.local_size = b.ndof;
  map.ndof = m.num_cells() * b.ndof;
  map.cell_dofs.resize(map.ndof);
  for (int i = 0; i < map.ndof; ++i) map.cell_dofs[i] = i;
  map.cell_signs.assign(map.ndof, 1.0);
  map.role.assign(map.ndof, DofRole::Local);
  return map;
}

DofMap build_facet_map(const Mesh& m, Family family, int order, bool constrain_boundary, std::string name) {
  if (family != Family::FacetScalar && family != Family::FacetTangential) {
    throw InvalidArgument("build_facet_map: not a facet family");
  }
  const LocalBasis& b = local_basis(family, order);
  DofMap map;
  map.name = std::move(name);
  map.family = family;
  map.order = order;
  map.per_facet = b.ndof;
  map.local_size = 3 * b.ndof;
  map.facet_dofs.assign(size_t(m.num_facets()) * b.ndof, -1);
  int next = 0;
  for (int f = 0; f < m.num_facets(); ++f) {
    if (constrain_boundary && m.is_boundary(f)) {
      map.num_constrained += b.ndof;
      continue;
    }
    for (int k = 0; k < b.ndof; ++k) map.facet_dofs[f * b.ndof + k] = next++;
  }
  map.ndof = next;
  map.cell_dofs.resize(size_t(m.num_cells()) * map.local_size);
  map.cell_signs.assign(map.cell_dofs.size(), 1.0);
  for (int c = 0; c < m.num_cells(); ++c) {
    for (int e = 0; e < 3; ++e) {
      const int f = m.cell_facets(c)[e].facet;
      for (int k = 0; k < b.ndof; ++k) map.cell_dofs[c * map.local_size + e * b.ndof + k] = map.facet_dofs[f * b.ndof + k];
    }
  }
  map.role.assign(map.ndof, DofRole::Coupling);
  return map;
}

SpaceSet build_spaces(std::shared_ptr<const Mesh> mesh, int l) {
  if (l < 1 || l > 4) throw UnsupportedDegree("order l must be in [1,4]");
  SpaceSet s;
  s.mesh = mesh;
  s.l = l;
  const Mesh& m = *mesh;
  s.U = build_hdiv_map(m, Family::BDM, l, false, true, "U");
  s.Uhat = build_facet_map(m, Family::FacetTangential, l, true, "Uhat");
  s.W = build_hdiv_map(m, Family::RT, l - 1, true, false, "W");
  s.P = build_scalar_map(m, l - 1, "P");
  s.Phat = build_facet_map(m, Family::FacetScalar, l - 1, false, "Phat");
  return s;
}

std::vector<DofReport> dof_report(const SpaceSet& s) {
  std::vector<DofReport> r;
  for (const DofMap* d : {&s.U, &s.Uhat, &s.W, &s.P, &s.Phat}) r.push_back({d->name, d->ndof, d->num_coupling()});
  return r;
}

Vec interpolate_vector(const Mesh& m, const DofMap& map, const VectorFn& f) {
  const LocalBasis& b = local_basis(map.family, map.order);
  if (!b.is_vector()) throw InvalidArgument("interpolate_vector: scalar space");
  Vec x = Vec::Zero(map.ndof);
  const auto& erule = edge_rule(interp_degree(b.degree));
  const auto& trule = triangle_rule(interp_degree(b.degree));
  const int ntm = num_monomials(b.interior_test_degree);
  for (int c = 0; c < m.num_cells(); ++c) {
    const AffineMap A = affine_map(m, c);
    const auto d = map.dofs(c);
    const auto sg = map.signs(c);
    // Interior moments use the Piola pull-back det * J^{-1} f.
    Vec interior;
    if (b.interior_tests.rows() > 0) {
      interior.setZero(b.interior_tests.rows());
      for (int q = 0; q < trule.size(); ++q) {
        const Point xh = trule.points[q];
        const Point fh = A.det * (A.inverse * f(A.to_physical(xh)));
        const Vec mv = eval_monomials(b.interior_test_degree, xh).v;
        for (int comp = 0; comp < 2; ++comp) {
          interior += trule.weights[q] * fh[comp] * (b.interior_tests.middleCols(comp * ntm, ntm) * mv);
        }
      }
    }
    for (int i = 0; i < b.ndof; ++i) {
      if (d[i] < 0) continue;
      const DofClass& dc = b.dofs[i];
      double val = 0.0;
      if (dc.kind == DofKind::EdgeMoment) {
        const Point pa = A.to_physical(reference_vertex((dc.edge + 1) % 3));
        const Point pb = A.to_physical(reference_vertex((dc.edge + 2) % 3));
        const Point nu(pb.y() - pa.y(), -(pb.x() - pa.x()));
        for (int q = 0; q < erule.size(); ++q) {
          const double s = erule.points[q].x();
          val += erule.weights[q] * f((1.0 - s) * pa + s * pb).dot(nu) * shifted_legendre(dc.moment, s)[dc.moment];
        }
      } else {
        val = interior[dc.moment];
      }
      x[d[i]] = sg[i] * val;
    }
  }
  return x;
}

Vec interpolate_scalar(const Mesh& m, const DofMap& map, const ScalarFn& f) {
  const LocalBasis& b = local_basis(map.family, map.order);
  if (b.family != Family::PScalar) throw InvalidArgument("interpolate_scalar: not a scalar cell space");
  Vec x = Vec::Zero(map.ndof);
  const auto& trule = triangle_rule(interp_degree(b.degree));
  for (int c = 0; c < m.num_cells(); ++c) {
    const AffineMap A = affine_map(m, c);
    Vec mom = Vec::Zero(b.ndof);
    for (int q = 0; q < trule.size(); ++q) {
      const Point xh = trule.points[q];
      mom += trule.weights[q] * f(A.to_physical(xh)) * (b.interior_tests * eval_monomials(b.interior_test_degree, xh).v);
    }
    const auto d = map.dofs(c);
    for (int i = 0; i < b.ndof; ++i) x[d[i]] = mom[b.dofs[i].moment];
  }
  return x;
}

namespace {

Vec facet_projection(const Mesh& m, const DofMap& map, const std::function<double(int, const Point&)>& q) {
  Vec x = Vec::Zero(map.ndof);
  const int n = map.per_facet;
  const auto& rule = edge_rule(interp_degree(n - 1));
  for (int f = 0; f < m.num_facets(); ++f) {
    const auto d = map.dofs_on_facet(f);
    if (d[0] < 0) continue;
    Vec mom = Vec::Zero(n);
    for (int k = 0; k < rule.size(); ++k) {
      const double s = rule.points[k].x();
      mom += rule.weights[k] * q(f, m.facet_point(f, s)) * shifted_legendre(n - 1, s);
    }
    for (int k = 0; k < n; ++k) x[d[k]] = (2 * k + 1) * mom[k];
  }
  return x;
}

}  // namespace

Vec interpolate_facet_tangential(const Mesh& m, const DofMap& map, const VectorFn& f) {
  if (map.family != Family::FacetTangential) throw InvalidArgument("interpolate_facet_tangential: wrong space");
  return facet_projection(m, map, [&](int facet, const Point& p) { return f(p).dot(m.facet_tangent(facet)); });
}

Vec interpolate_facet_scalar(const Mesh& m, const DofMap& map, const ScalarFn& f) {
  if (map.family != Family::FacetScalar) throw InvalidArgument("interpolate_facet_scalar: wrong space");
  return facet_projection(m, map, [&](int, const Point& p) { return f(p); });
}

}  // namespace hdgbiot
