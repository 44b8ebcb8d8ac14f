#pragma once

#include "hdgbiot/elements.hpp"
#include "hdgbiot/mesh.hpp"
#include "hdgbiot/quadrature.hpp"

#include <array>
#include <span>
#include <vector>

namespace hdgbiot {

/// Reference tabulation of a triangle basis at the points of a triangle rule
/// and at the points of an edge rule mapped onto each local edge.
class RefTabulation {
 public:
  RefTabulation(const LocalBasis& basis, int tri_degree, int edge_degree);

  const LocalBasis& basis() const { return *basis_; }
  const QuadRule& tri_rule() const { return *tri_rule_; }
  const QuadRule& edge_rule() const { return *edge_rule_; }
  const std::vector<ShapeValues>& tri() const { return tri_; }
  const std::vector<ShapeValues>& edge(int e) const { return edge_[e]; }

  /// Physical values on cell quadrature / on local edge e.
  std::vector<ShapeValues> tri_physical(const AffineMap& map) const;
  std::vector<ShapeValues> edge_physical(const AffineMap& map, int e) const;

 private:
  const LocalBasis* basis_;
  const QuadRule* tri_rule_;
  const QuadRule* edge_rule_;
  std::vector<ShapeValues> tri_;
  std::array<std::vector<ShapeValues>, 3> edge_;
};

struct EdgeFrame {
  int facet = -1;
  FacetRef ref;
  Point n_out;   // unit outward normal of the cell
  Point t;       // unit global tangent of the facet
  double length = 0.0;
  bool boundary = false;
};

struct CellFrame {
  int cell = -1;
  AffineMap map;
  double h = 0.0;     // cell diameter
  double area = 0.0;
  std::array<EdgeFrame, 3> edges;

  /// Physical point of local edge e at local parameter s.
  Point edge_point(int e, double s) const { return map.to_physical(reference_edge_point(e, s)); }
};

CellFrame make_cell_frame(const Mesh& m, int c);

/// Adds s_i s_j K(i, j) at (rows[i], cols[j]); negative ids are skipped.
void scatter(Triplets& t, std::span<const int> rows, std::span<const double> rsign, std::span<const int> cols,
             std::span<const double> csign, const Mat& K, int row_offset = 0, int col_offset = 0);

/// Strain of a vector basis function from its gradient.
inline Mat2 sym(const Mat2& g) { return 0.5 * (g + g.transpose()); }

}  // namespace hdgbiot
