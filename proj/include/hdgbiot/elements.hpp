#pragma once

#include "hdgbiot/mesh.hpp"
#include "hdgbiot/types.hpp"

#include <array>
#include <vector>

namespace hdgbiot {

enum class Family { BDM, RT, PScalar, FacetTangential, FacetScalar };

const char* family_name(Family f);

enum class DofKind { EdgeMoment, Interior, Facet };

struct DofClass {
  DofKind kind = DofKind::Interior;
  int edge = -1;    // local edge for EdgeMoment
  int moment = -1;  // Legendre index for EdgeMoment/Facet, test index for Interior
};

/// Basis functions of all ndof local shape functions at one point.
///
/// Vector families use both columns of `v`; scalar families use column 0,
/// grad[j].row(0) and hess[j][0].
struct ShapeValues {
  Eigen::Matrix<double, Eigen::Dynamic, 2> v;
  std::vector<Mat2> grad;                // grad[j](c, d) = d v_c / d x_d
  std::vector<std::array<Mat2, 2>> hess;  // hess[j][c] = Hessian of component c
  Vec div;
};

/// Nodal (dual) basis of a reference element.
///
/// Triangle families are polynomials of degree `degree`, stored as
/// coefficients over the vector monomials: coeffs(j, c * nmono + m) multiplies
/// monomial m in component c. Edge moments are
///   int_0^1 v(x(s)) . nu_e L_k(s) ds,  nu_e = (dy, -dx)
/// over local edge e running from vertex (e+1)%3 to (e+2)%3, which equals the
/// physical flux moment int_e v.n L_k ds and is preserved by the Piola map.
///
/// Facet families live on [0,1] with basis L_k(s) (shifted Legendre); the
/// dual functionals are (2k+1) int q L_k.
struct LocalBasis {
  Family family = Family::PScalar;
  int order = 0;
  int ndof = 0;
  int ncomp = 1;
  int degree = 0;
  std::vector<DofClass> dofs;
  Mat coeffs;
  /// Dof functionals applied to the basis; identity up to round-off.
  Mat dual_matrix;
  /// Number of Legendre moments per edge.
  int edge_moments = 0;
  /// Interior dofs are reference moments int v . t_i against these
  /// polynomials (same layout as coeffs, degree interior_test_degree).
  Mat interior_tests;
  int interior_test_degree = 0;

  bool is_vector() const { return ncomp == 2; }
  bool is_facet() const { return family == Family::FacetTangential || family == Family::FacetScalar; }

  ShapeValues eval(const Point& xhat) const;
  /// Facet families only.
  Vec eval_facet(double s) const;
};

/// Builds a basis from scratch (no cache).
LocalBasis build_local_basis(Family family, int order);

/// Cached, thread-safe accessor.
const LocalBasis& local_basis(Family family, int order);

/// Reference -> physical: contravariant Piola for BDM/RT, affine pull-back
/// for scalars.
ShapeValues push_forward(const LocalBasis& basis, const AffineMap& map, const ShapeValues& ref);

/// Reference values at a list of points.
std::vector<ShapeValues> tabulate(const LocalBasis& basis, const std::vector<Point>& points);

/// Reference triangle vertices and local edge endpoints.
Point reference_vertex(int i);
/// Point of local edge e at local parameter s.
Point reference_edge_point(int e, double s);
/// Scaled outward normal (dy, -dx) of local reference edge e.
Point reference_edge_normal(int e);

/// Order-specific dimension formulas.
int bdm_dim(int l);
int rt_dim(int k);
int pscalar_dim(int k);

}  // namespace hdgbiot
