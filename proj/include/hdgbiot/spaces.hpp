#pragma once

#include "hdgbiot/elements.hpp"
#include "hdgbiot/mesh.hpp"
#include "hdgbiot/types.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hdgbiot {

using ScalarFn = std::function<double(const Point&)>;
using VectorFn = std::function<Point(const Point&)>;

enum class DofRole { Local, Coupling };

/// Cell-to-global dof table of one discrete space.
///
/// Constrained (essential boundary) dofs are not numbered; their entry is -1.
/// Global basis function restricted to a cell = sign * local basis function.
struct DofMap {
  std::string name;
  Family family = Family::PScalar;
  int order = 0;
  int ndof = 0;
  int local_size = 0;
  int num_constrained = 0;
  std::vector<int> cell_dofs;
  std::vector<double> cell_signs;
  std::vector<DofRole> role;  // per global dof
  /// Facet spaces and conforming H(div): global dofs owned by each facet
  /// (-1 if constrained); empty for broken spaces.
  std::vector<int> facet_dofs;
  int per_facet = 0;

  std::span<const int> dofs(int c) const { return {cell_dofs.data() + c * local_size, size_t(local_size)}; }
  std::span<const double> signs(int c) const { return {cell_signs.data() + c * local_size, size_t(local_size)}; }
  std::span<const int> dofs_on_facet(int f) const { return {facet_dofs.data() + f * per_facet, size_t(per_facet)}; }
  int num_coupling() const;

  /// Local coefficient vector on cell c (constrained dofs read as zero).
  Vec gather(int c, const Vec& x) const;
};

/// Conforming or broken H(div) space from a BDM/RT basis.
DofMap build_hdiv_map(const Mesh& m, Family family, int order, bool broken, bool constrain_boundary,
                      std::string name);
/// Broken scalar P_k.
DofMap build_scalar_map(const Mesh& m, int order, std::string name);
/// Facet space with `order + 1` Legendre dofs per facet; local layout is
/// 3 blocks ordered by local edge.
DofMap build_facet_map(const Mesh& m, Family family, int order, bool constrain_boundary, std::string name);

/// The five spaces of the three-field scheme at order l.
struct SpaceSet {
  std::shared_ptr<const Mesh> mesh;
  int l = 1;
  DofMap U;     // BDM_l, H_0(div)
  DofMap Uhat;  // tangential facet P_l, zero on the boundary
  DofMap W;     // broken RT_{l-1}
  DofMap P;     // broken P_{l-1}
  DofMap Phat;  // facet P_{l-1} on all facets
};

SpaceSet build_spaces(std::shared_ptr<const Mesh> mesh, int l);

struct DofReport {
  std::string space;
  int dof = 0;
  int coupling = 0;
};
std::vector<DofReport> dof_report(const SpaceSet& s);

/// Canonical interpolation (dof functionals) for BDM/RT and P; L2 projection
/// for the facet spaces. Constrained dofs are skipped.
Vec interpolate_vector(const Mesh& m, const DofMap& map, const VectorFn& f);
Vec interpolate_scalar(const Mesh& m, const DofMap& map, const ScalarFn& f);
Vec interpolate_facet_tangential(const Mesh& m, const DofMap& map, const VectorFn& f);
Vec interpolate_facet_scalar(const Mesh& m, const DofMap& map, const ScalarFn& f);

/// Facet parameter of the global facet at local edge parameter s.
inline double global_facet_param(const FacetRef& ref, double s) { return ref.reversed ? 1.0 - s : s; }

}  // namespace hdgbiot
