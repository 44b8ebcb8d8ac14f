#include "hdgbiot/elements.hpp"

#include "hdgbiot/polynomial.hpp"
#include "hdgbiot/quadrature.hpp"

#include <map>
#include <mutex>

namespace hdgbiot {

const char* family_name(Family f) {
  switch (f) {
    case Family::BDM: return "BDM";
    case Family::RT: return "RT";
    case Family::PScalar: return "P";
    case Family::FacetTangential: return "FacetTangential";
    case Family::FacetScalar: return "FacetScalar";
  }
  return "?";
}

int bdm_dim(int l) { return (l + 1) * (l + 2); }
int rt_dim(int k) { return (k + 1) * (k + 3); }
int pscalar_dim(int k) { return (k + 1) * (k + 2) / 2; }

Point reference_vertex(int i) {
  static const Point v[3] = {Point(0, 0), Point(1, 0), Point(0, 1)};
  return v[i];
}

Point reference_edge_point(int e, double s) {
  return (1.0 - s) * reference_vertex((e + 1) % 3) + s * reference_vertex((e + 2) % 3);
}

Point reference_edge_normal(int e) {
  const Point d = reference_vertex((e + 2) % 3) - reference_vertex((e + 1) % 3);
  return Point(d.y(), -d.x());
}

namespace {

// Span of a set of (vector) polynomials, rows are coefficient vectors over
// ncomp * num_monomials(degree).
struct PolySet {
  int ncomp = 1;
  int degree = 0;
  Mat rows;

  int nmono() const { return num_monomials(degree); }
};

PolySet full_space(int ncomp, int degree) {
  PolySet s{ncomp, degree, Mat::Identity(ncomp * num_monomials(degree), ncomp * num_monomials(degree))};
  return s;
}

// (P_k)^2 + x P~_k
PolySet rt_space(int k) {
  PolySet s{2, k + 1, Mat()};
  const int nm = s.nmono();
  const int nk = num_monomials(k);
  s.rows.setZero(2 * nk + k + 1, 2 * nm);
  int r = 0;
  for (int c = 0; c < 2; ++c)
    for (int m = 0; m < nk; ++m) s.rows(r++, c * nm + m) = 1.0;
  for (int i = k; i >= 0; --i) {
    const int j = k - i;
    s.rows(r, monomial_index(i + 1, j)) = 1.0;
    s.rows(r, nm + monomial_index(i, j + 1)) = 1.0;
    ++r;
  }
  return s;
}

// (P_k)^2 + (y, -x) P~_k
PolySet nedelec_space(int k) {
  PolySet s{2, k + 1, Mat()};
  const int nm = s.nmono();
  const int nk = num_monomials(k);
  s.rows.setZero(2 * nk + k + 1, 2 * nm);
  int r = 0;
  for (int c = 0; c < 2; ++c)
    for (int m = 0; m < nk; ++m) s.rows(r++, c * nm + m) = 1.0;
  for (int i = k; i >= 0; --i) {
    const int j = k - i;
    s.rows(r, monomial_index(i, j + 1)) = 1.0;
    s.rows(r, nm + monomial_index(i + 1, j)) = -1.0;
    ++r;
  }
  return s;
}

// Monomial values at the points of a rule, nq x nmono.
Mat monomial_table(int degree, const std::vector<Point>& pts) {
  Mat t(pts.size(), num_monomials(degree));
  for (size_t q = 0; q < pts.size(); ++q) t.row(q) = eval_monomials(degree, pts[q]).v.transpose();
  return t;
}

void orthonormalize(PolySet& s) {
  const auto& rule = triangle_rule(2 * s.degree);
  const Mat phi = monomial_table(s.degree, rule.points);
  const Eigen::Map<const Vec> w(rule.weights.data(), rule.size());
  const Mat mass_scalar = phi.transpose() * w.asDiagonal() * phi;
  const int nm = s.nmono();
  Mat mass = Mat::Zero(s.ncomp * nm, s.ncomp * nm);
  for (int c = 0; c < s.ncomp; ++c) mass.block(c * nm, c * nm, nm, nm) = mass_scalar;
  const Mat gram = s.rows * mass * s.rows.transpose();
  Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success) throw std::logic_error("orthonormalize: dependent spanning set");
  s.rows = llt.matrixL().solve(s.rows);
}

// Values of the polynomials in `s` at points, one matrix per component:
// out[c](q, r).
std::vector<Mat> eval_set(const PolySet& s, const std::vector<Point>& pts) {
  const Mat phi = monomial_table(s.degree, pts);
  const int nm = s.nmono();
  std::vector<Mat> out;
  for (int c = 0; c < s.ncomp; ++c) out.push_back(phi * s.rows.middleCols(c * nm, nm).transpose());
  return out;
}

// Edge moment functional over a space of given (ncomp, degree).
Vec edge_functional(int ncomp, int degree, int e, int k) {
  const auto& rule = edge_rule(degree + k);
  const int nm = num_monomials(degree);
  const Point nu = reference_edge_normal(e);
  Vec f = Vec::Zero(ncomp * nm);
  for (int q = 0; q < rule.size(); ++q) {
    const double s = rule.points[q].x();
    const double lk = shifted_legendre(k, s)[k];
    const Vec mv = eval_monomials(degree, reference_edge_point(e, s)).v;
    for (int c = 0; c < ncomp; ++c) f.segment(c * nm, nm) += rule.weights[q] * lk * nu[c] * mv;
  }
  return f;
}

// Moments against every member of `tests`.
Mat interior_functionals(int ncomp, int degree, const PolySet& tests) {
  const auto& rule = triangle_rule(degree + tests.degree);
  const Mat phi = monomial_table(degree, rule.points);
  const auto tv = eval_set(tests, rule.points);
  const int nm = num_monomials(degree);
  const Eigen::Map<const Vec> w(rule.weights.data(), rule.size());
  Mat f = Mat::Zero(tests.rows.rows(), ncomp * nm);
  for (int c = 0; c < ncomp; ++c) f.middleCols(c * nm, nm) = tv[c].transpose() * w.asDiagonal() * phi;
  return f;
}

LocalBasis build_triangle_basis(Family family, int order) {
  LocalBasis b;
  b.family = family;
  b.order = order;
  PolySet span;
  std::vector<Vec> functionals;
  Mat interior;
  int n_edge_moments = 0;
  switch (family) {
    case Family::BDM: {
      if (order < 1 || order > 4) throw UnsupportedDegree("BDM order must be in [1,4]");
      span = full_space(2, order);
      n_edge_moments = order + 1;
      if (order >= 2) {
        PolySet t = nedelec_space(order - 2);
        orthonormalize(t);
        interior = interior_functionals(2, order, t);
        b.interior_tests = t.rows;
        b.interior_test_degree = t.degree;
      }
      break;
    }
    case Family::RT: {
      if (order < 0 || order > 4) throw UnsupportedDegree("RT order must be in [0,4]");
      span = rt_space(order);
      n_edge_moments = order + 1;
      if (order >= 1) {
        PolySet t = full_space(2, order - 1);
        orthonormalize(t);
        interior = interior_functionals(2, span.degree, t);
        b.interior_tests = t.rows;
        b.interior_test_degree = t.degree;
      }
      break;
    }
    case Family::PScalar: {
      if (order < 0 || order > 4) throw UnsupportedDegree("scalar order must be in [0,4]");
      span = full_space(1, order);
      PolySet t = span;
      orthonormalize(t);
      interior = interior_functionals(1, order, t);
      b.interior_tests = t.rows;
      b.interior_test_degree = t.degree;
      break;
    }
    default: throw InvalidArgument("not a triangle family");
  }
  orthonormalize(span);
  b.ncomp = span.ncomp;
  b.degree = span.degree;
  b.ndof = static_cast<int>(span.rows.rows());
  b.edge_moments = n_edge_moments;

  const int width = span.ncomp * span.nmono();
  Mat F(b.ndof, width);
  int r = 0;
  for (int e = 0; e < 3; ++e) {
    for (int k = 0; k < n_edge_moments; ++k) {
      F.row(r++) = edge_functional(span.ncomp, span.degree, e, k).transpose();
      b.dofs.push_back({DofKind::EdgeMoment, e, k});
    }
  }
  for (int i = 0; i < interior.rows(); ++i) {
    F.row(r++) = interior.row(i);
    b.dofs.push_back({DofKind::Interior, -1, i});
  }
  if (r != b.ndof) throw std::logic_error("dof functional count does not match space dimension");

  const Mat V = F * span.rows.transpose();
  Eigen::FullPivLU<Mat> lu(V.transpose());
  const Mat A = lu.solve(Mat::Identity(b.ndof, b.ndof));
  b.coeffs = A * span.rows;
  b.dual_matrix = F * b.coeffs.transpose();
  return b;
}

}  // namespace

LocalBasis build_local_basis(Family family, int order) {
  if (family == Family::FacetTangential || family == Family::FacetScalar) {
    if (order < 0 || order > 5) throw UnsupportedDegree("facet order must be in [0,5]");
    LocalBasis b;
    b.family = family;
    b.order = order;
    b.ndof = order + 1;
    b.ncomp = 1;
    b.degree = order;
    for (int k = 0; k <= order; ++k) b.dofs.push_back({DofKind::Facet, -1, k});
    // Dual functionals (2k+1) int q L_k applied to L_j.
    const auto& rule = edge_rule(2 * order);
    b.dual_matrix = Mat::Zero(b.ndof, b.ndof);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec L = shifted_legendre(order, rule.points[q].x());
      for (int i = 0; i <= order; ++i) b.dual_matrix.row(i) += (2 * i + 1) * rule.weights[q] * L[i] * L.transpose();
    }
    return b;
  }
  return build_triangle_basis(family, order);
}

const LocalBasis& local_basis(Family family, int order) {
  static std::map<std::pair<int, int>, LocalBasis> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(static_cast<int>(family), order);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_local_basis(family, order)).first;
  return it->second;
}

Vec LocalBasis::eval_facet(double s) const {
  if (!is_facet()) throw InvalidArgument("eval_facet on a triangle family");
  return shifted_legendre(order, s);
}

ShapeValues LocalBasis::eval(const Point& xhat) const {
  if (is_facet()) throw InvalidArgument("eval on a facet family");
  const MonomialValues m = eval_monomials(degree, xhat);
  const int nm = num_monomials(degree);
  ShapeValues out;
  out.v.setZero(ndof, 2);
  out.grad.assign(ndof, Mat2::Zero());
  out.hess.assign(ndof, {Mat2::Zero(), Mat2::Zero()});
  out.div.setZero(ndof);
  for (int c = 0; c < ncomp; ++c) {
    const auto C = coeffs.middleCols(c * nm, nm);
    const Vec v = C * m.v, dx = C * m.dx, dy = C * m.dy;
    const Vec dxx = C * m.dxx, dxy = C * m.dxy, dyy = C * m.dyy;
    out.v.col(c) = v;
    for (int j = 0; j < ndof; ++j) {
      out.grad[j](c, 0) = dx[j];
      out.grad[j](c, 1) = dy[j];
      out.hess[j][c] << dxx[j], dxy[j], dxy[j], dyy[j];
    }
  }
  if (ncomp == 2) {
    for (int j = 0; j < ndof; ++j) out.div[j] = out.grad[j].trace();
  }
  return out;
}

ShapeValues push_forward(const LocalBasis& basis, const AffineMap& map, const ShapeValues& ref) {
  if (!(map.det > 0.0)) throw SingularGeometry("push_forward: non-positive Jacobian");
  const int n = basis.ndof;
  ShapeValues out;
  out.v.resize(n, 2);
  out.grad.resize(n);
  out.hess.resize(n);
  const Mat2& J = map.jacobian;
  const Mat2& Ji = map.inverse;
  const Mat2& JiT = map.inverse_transpose;
  if (basis.ncomp == 2) {
    const double s = 1.0 / map.det;
    out.v = ref.v * (s * J.transpose());
    out.div = s * ref.div;
    for (int j = 0; j < n; ++j) {
      out.grad[j] = s * J * ref.grad[j] * Ji;
      const Mat2 h0 = JiT * ref.hess[j][0] * Ji;
      const Mat2 h1 = JiT * ref.hess[j][1] * Ji;
      out.hess[j][0] = s * (J(0, 0) * h0 + J(0, 1) * h1);
      out.hess[j][1] = s * (J(1, 0) * h0 + J(1, 1) * h1);
    }
  } else {
    out.v = ref.v;
    out.div = ref.div;
    for (int j = 0; j < n; ++j) {
      out.grad[j].setZero();
      out.grad[j].row(0) = (JiT * ref.grad[j].row(0).transpose()).transpose();
      out.hess[j][0] = JiT * ref.hess[j][0] * Ji;
      out.hess[j][1].setZero();
    }
  }
  return out;
}

std::vector<ShapeValues> tabulate(const LocalBasis& basis, const std::vector<Point>& points) {
  std::vector<ShapeValues> t;
  t.reserve(points.size());
  for (const auto& p : points) t.push_back(basis.eval(p));
  return t;
}

}  // namespace hdgbiot
