#pragma once

#include "hdgbiot/types.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace hdgbiot {

/// A cell's view of one of its facets.
///
/// `sign` is +1 when the cell's outward normal coincides with the global
/// facet normal and -1 otherwise. `reversed` is true when the cell's local
/// edge parametrization runs against the global one (see Mesh).
struct FacetRef {
  int facet = -1;
  int sign = 1;
  bool reversed = false;
};

/// Conforming triangulation of a polygonal domain.
///
/// Conventions:
///  - cells are stored counter-clockwise, local edge i is opposite local
///    vertex i and runs from vertex (i+1)%3 to vertex (i+2)%3;
///  - facets are stored with sorted vertex ids; the global facet
///    parametrization s in [0,1] runs from the lower to the higher vertex id;
///  - facet_cells(f)[0] < facet_cells(f)[1]; the second entry is -1 on the
///    boundary. The global normal is the outward normal of facet_cells(f)[0],
///    so it points from the lower-numbered to the higher-numbered cell and
///    outward on the boundary.
class Mesh {
 public:
  Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_facets() const { return static_cast<int>(facets_.size()); }
  int num_boundary_facets() const { return num_boundary_facets_; }
  int num_interior_facets() const { return num_facets() - num_boundary_facets_; }

  const Point& vertex(int v) const { return vertices_[v]; }
  const std::array<int, 3>& cell(int c) const { return cells_[c]; }
  const std::array<int, 2>& facet(int f) const { return facets_[f]; }
  const std::array<FacetRef, 3>& cell_facets(int c) const { return cell_facets_[c]; }
  const std::array<int, 2>& facet_cells(int f) const { return facet_cells_[f]; }
  bool is_boundary(int f) const { return facet_cells_[f][1] < 0; }

  double cell_area(int c) const { return cell_area_[c]; }
  /// Longest edge of the cell.
  double cell_diameter(int c) const { return h_cell_[c]; }
  double facet_length(int f) const { return h_facet_[f]; }

  /// Unit global normal of facet f.
  Point facet_normal(int f) const;
  /// Unit global tangent, pointing along the global parametrization.
  Point facet_tangent(int f) const;
  /// Point at global parameter s on facet f.
  Point facet_point(int f, double s) const;

  /// Local index of facet f in cell c, or -1.
  int local_facet_index(int c, int f) const;

  double total_area() const;

  /// Plain-text dump (vertex list followed by cell list).
  void write(std::ostream& os) const;

 private:
  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<std::array<int, 2>> facets_;
  std::vector<std::array<FacetRef, 3>> cell_facets_;
  std::vector<std::array<int, 2>> facet_cells_;
  std::vector<double> cell_area_;
  std::vector<double> h_cell_;
  std::vector<double> h_facet_;
  int num_boundary_facets_ = 0;
};

/// n x n squares on (0,1)^2, each split into two triangles along the same
/// diagonal.
Mesh unit_square_mesh(int n);

/// Red refinement: every triangle is split into four congruent children.
Mesh refine_uniform(const Mesh& m);

/// Affine map from the reference triangle {(0,0),(1,0),(0,1)} onto a cell.
struct AffineMap {
  Mat2 jacobian;
  Mat2 inverse;            // jacobian^{-1}
  Mat2 inverse_transpose;  // jacobian^{-T}
  double det = 0.0;
  Point translation;

  Point to_physical(const Point& xhat) const { return jacobian * xhat + translation; }
  Point to_reference(const Point& x) const { return inverse * (x - translation); }
};

AffineMap affine_map(const Mesh& m, int cell);

}  // namespace hdgbiot
