#pragma once

#include "hdgbiot/types.hpp"

#include <vector>

namespace hdgbiot {

struct QuadRule {
  std::vector<Point> points;  // edge rules use points[i].x() only
  std::vector<double> weights;
  int exact_degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Highest degree for which rules are provided.
inline constexpr int kMaxQuadratureDegree = 40;

/// Gauss-Legendre on [0,1], exact up to `degree`.
const QuadRule& edge_rule(int degree);

/// Collapsed (Duffy) Gauss rule on the reference triangle, exact up to `degree`.
const QuadRule& triangle_rule(int degree);

/// Gauss-Legendre nodes and weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace hdgbiot
