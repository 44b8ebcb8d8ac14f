#pragma once

#include "hdgbiot/types.hpp"

namespace hdgbiot {

/// Number of monomials x^i y^j with i + j <= degree.
inline int num_monomials(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// Index of x^i y^j. Monomials are grouped by total degree, x-power descending.
inline int monomial_index(int i, int j) {
  const int d = i + j;
  return d * (d + 1) / 2 + (d - i);
}

/// Values and derivatives up to second order of all monomials of degree
/// <= `degree` at one point.
struct MonomialValues {
  Vec v, dx, dy, dxx, dxy, dyy;
};

MonomialValues eval_monomials(int degree, const Point& x);

/// Shifted Legendre polynomials L_0..L_n on [0,1] (L_k(1) = 1).
Vec shifted_legendre(int n, double s);

}  // namespace hdgbiot
