#pragma once

#include "hdgbiot/condense.hpp"

namespace hdgbiot {

/// w + grad p = 0, div w = g on the unit square with p = 0 on the boundary.
struct DarcyCase {
  ScalarFn p;
  VectorFn w;
  ScalarFn g;
};

/// p = sin(pi x) sin(pi y), w = -grad p, g = div w.
DarcyCase darcy_manufactured();

struct DarcySolution {
  std::string method;  // "M" or "HM"
  int k = 0;           // RT_k / P_k / P_k(F)
  Vec w;               // local coefficients stacked cell by cell
  Vec p;
  Vec phat;            // HM only
  int dof = 0;
  int cdof = 0;
  long nze = 0;
  double jump_max = 0.0;  // HM: max |facet moment of [w.n]|
};

/// Conforming RT_k x P_k, solved monolithically.
DarcySolution solve_darcy_mixed(std::shared_ptr<const Mesh> mesh, int k, const DarcyCase& dc);
/// Broken RT_k x P_k x P_k(F), facet unknowns fixed to zero on the boundary,
/// solved by condensation onto the facet unknowns.
DarcySolution solve_darcy_hybrid(std::shared_ptr<const Mesh> mesh, int k, const DarcyCase& dc);

/// Structural nonzeros of a matrix whose pattern is the union of the dense
/// blocks sets[c] x sets[c].
long clique_nonzeros(int n, const std::vector<std::vector<int>>& sets);

}  // namespace hdgbiot
