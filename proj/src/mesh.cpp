#include "hdgbiot/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <utility>

namespace hdgbiot {

namespace {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  const int nc = num_cells();
  cell_area_.resize(nc);
  h_cell_.resize(nc);
  cell_facets_.resize(nc);

  std::map<std::pair<int, int>, int> facet_id;
  for (int c = 0; c < nc; ++c) {
    const auto& vs = cells_[c];
    for (int v : vs) {
      if (v < 0 || v >= num_vertices()) throw InvalidArgument("cell references unknown vertex");
    }
    const double area = signed_area(vertices_[vs[0]], vertices_[vs[1]], vertices_[vs[2]]);
    if (!(area > 0.0)) {
      throw SingularGeometry("cell " + std::to_string(c) + " has non-positive signed area");
    }
    cell_area_[c] = area;
    double h = 0.0;
    for (int i = 0; i < 3; ++i) {
      const int a = vs[(i + 1) % 3];
      const int b = vs[(i + 2) % 3];
      h = std::max(h, (vertices_[a] - vertices_[b]).norm());
      const auto key = std::minmax(a, b);
      auto [it, inserted] = facet_id.try_emplace({key.first, key.second}, num_facets());
      if (inserted) {
        facets_.push_back({key.first, key.second});
        facet_cells_.push_back({c, -1});
      } else {
        auto& fc = facet_cells_[it->second];
        if (fc[1] >= 0) throw InvalidArgument("non-manifold facet");
        fc[1] = c;  // cells are visited in increasing order, so fc[0] < c
      }
      cell_facets_[c][i].facet = it->second;
      cell_facets_[c][i].reversed = a > b;
    }
    h_cell_[c] = h;
  }

  h_facet_.resize(num_facets());
  for (int f = 0; f < num_facets(); ++f) {
    h_facet_[f] = (vertices_[facets_[f][0]] - vertices_[facets_[f][1]]).norm();
    if (facet_cells_[f][1] < 0) ++num_boundary_facets_;
  }
  for (int c = 0; c < nc; ++c) {
    for (auto& ref : cell_facets_[c]) ref.sign = (facet_cells_[ref.facet][0] == c) ? 1 : -1;
  }
}

Point Mesh::facet_tangent(int f) const {
  const Point d = vertices_[facets_[f][1]] - vertices_[facets_[f][0]];
  return d / d.norm();
}

Point Mesh::facet_normal(int f) const {
  // Outward normal of facet_cells(f)[0].
  const int c = facet_cells_[f][0];
  const int i = local_facet_index(c, f);
  const Point a = vertices_[cells_[c][(i + 1) % 3]];
  const Point b = vertices_[cells_[c][(i + 2) % 3]];
  const Point d = b - a;
  return Point(d.y(), -d.x()) / d.norm();
}

Point Mesh::facet_point(int f, double s) const {
  return (1.0 - s) * vertices_[facets_[f][0]] + s * vertices_[facets_[f][1]];
}

int Mesh::local_facet_index(int c, int f) const {
  for (int i = 0; i < 3; ++i) {
    if (cell_facets_[c][i].facet == f) return i;
  }
  return -1;
}

double Mesh::total_area() const {
  double a = 0.0;
  for (double x : cell_area_) a += x;
  return a;
}

void Mesh::write(std::ostream& os) const {
  os << "vertices " << num_vertices() << '\n';
  os.precision(17);
  for (const auto& v : vertices_) os << v.x() << ' ' << v.y() << '\n';
  os << "cells " << num_cells() << '\n';
  for (const auto& c : cells_) os << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
}

Mesh unit_square_mesh(int n) {
  if (n < 1) throw InvalidArgument("unit_square_mesh: n must be >= 1");
  std::vector<Point> vertices;
  vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) vertices.emplace_back(double(i) / n, double(j) / n);
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> cells;
  cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Mesh(std::move(vertices), std::move(cells));
}

Mesh refine_uniform(const Mesh& m) {
  std::vector<Point> vertices;
  vertices.reserve(m.num_vertices() + m.num_facets());
  for (int v = 0; v < m.num_vertices(); ++v) vertices.push_back(m.vertex(v));
  const int base = m.num_vertices();
  for (int f = 0; f < m.num_facets(); ++f) vertices.push_back(m.facet_point(f, 0.5));

  std::vector<std::array<int, 3>> cells;
  cells.reserve(4 * m.num_cells());
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& v = m.cell(c);
    const auto& fr = m.cell_facets(c);
    const int m0 = base + fr[0].facet;  // midpoint of edge opposite v0
    const int m1 = base + fr[1].facet;
    const int m2 = base + fr[2].facet;
    cells.push_back({v[0], m2, m1});
    cells.push_back({m2, v[1], m0});
    cells.push_back({m1, m0, v[2]});
    cells.push_back({m0, m1, m2});
  }
  return Mesh(std::move(vertices), std::move(cells));
}

AffineMap affine_map(const Mesh& m, int cell) {
  const auto& v = m.cell(cell);
  const Point& a = m.vertex(v[0]);
  AffineMap map;
  map.jacobian.col(0) = m.vertex(v[1]) - a;
  map.jacobian.col(1) = m.vertex(v[2]) - a;
  map.translation = a;
  map.det = map.jacobian.determinant();
  const double scale = map.jacobian.cwiseAbs().maxCoeff();
  if (!(std::abs(map.det) > 1e-14 * scale * scale)) {
    throw SingularGeometry("affine_map: degenerate cell " + std::to_string(cell));
  }
  map.inverse = map.jacobian.inverse();
  map.inverse_transpose = map.inverse.transpose();
  return map;
}

}  // namespace hdgbiot
