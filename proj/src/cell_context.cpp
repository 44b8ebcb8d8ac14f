#include "hdgbiot/cell_context.hpp"

namespace hdgbiot {

RefTabulation::RefTabulation(const LocalBasis& basis, int tri_degree, int edge_degree)
    : basis_(&basis), tri_rule_(&triangle_rule(tri_degree)), edge_rule_(&hdgbiot::edge_rule(edge_degree)) {
  tri_ = tabulate(basis, tri_rule_->points);
  for (int e = 0; e < 3; ++e) {
    std::vector<Point> pts;
    for (const auto& p : edge_rule_->points) pts.push_back(reference_edge_point(e, p.x()));
    edge_[e] = tabulate(basis, pts);
  }
}

std::vector<ShapeValues> RefTabulation::tri_physical(const AffineMap& map) const {
  std::vector<ShapeValues> out;
  out.reserve(tri_.size());
  for (const auto& r : tri_) out.push_back(push_forward(*basis_, map, r));
  return out;
}

std::vector<ShapeValues> RefTabulation::edge_physical(const AffineMap& map, int e) const {
  std::vector<ShapeValues> out;
  out.reserve(edge_[e].size());
  for (const auto& r : edge_[e]) out.push_back(push_forward(*basis_, map, r));
  return out;
}

CellFrame make_cell_frame(const Mesh& m, int c) {
  CellFrame f;
  f.cell = c;
  f.map = affine_map(m, c);
  f.h = m.cell_diameter(c);
  f.area = m.cell_area(c);
  const auto& v = m.cell(c);
  for (int e = 0; e < 3; ++e) {
    EdgeFrame& ef = f.edges[e];
    ef.ref = m.cell_facets(c)[e];
    ef.facet = ef.ref.facet;
    const Point d = m.vertex(v[(e + 2) % 3]) - m.vertex(v[(e + 1) % 3]);
    ef.length = d.norm();
    ef.n_out = Point(d.y(), -d.x()) / ef.length;
    ef.t = m.facet_tangent(ef.facet);
    ef.boundary = m.is_boundary(ef.facet);
  }
  return f;
}

void scatter(Triplets& t, std::span<const int> rows, std::span<const double> rsign, std::span<const int> cols,
             std::span<const double> csign, const Mat& K, int row_offset, int col_offset) {
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0) continue;
    for (size_t j = 0; j < cols.size(); ++j) {
      if (cols[j] < 0) continue;
      t.emplace_back(rows[i] + row_offset, cols[j] + col_offset, rsign[i] * csign[j] * K(i, j));
    }
  }
}

}  // namespace hdgbiot
