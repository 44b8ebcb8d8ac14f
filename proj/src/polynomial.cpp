#include "hdgbiot/polynomial.hpp"

namespace hdgbiot {

MonomialValues eval_monomials(int degree, const Point& x) {
  const int n = num_monomials(degree);
  MonomialValues m;
  m.v.setZero(n);
  m.dx.setZero(n);
  m.dy.setZero(n);
  m.dxx.setZero(n);
  m.dxy.setZero(n);
  m.dyy.setZero(n);
  Vec px(degree + 1), py(degree + 1);
  px[0] = py[0] = 1.0;
  for (int k = 1; k <= degree; ++k) {
    px[k] = px[k - 1] * x.x();
    py[k] = py[k - 1] * x.y();
  }
  auto p = [](const Vec& pw, int k) { return k < 0 ? 0.0 : pw[k]; };
  for (int d = 0; d <= degree; ++d) {
    for (int i = d; i >= 0; --i) {
      const int j = d - i;
      const int a = monomial_index(i, j);
      m.v[a] = px[i] * py[j];
      m.dx[a] = i * p(px, i - 1) * py[j];
      m.dy[a] = j * px[i] * p(py, j - 1);
      m.dxx[a] = i * (i - 1) * p(px, i - 2) * py[j];
      m.dxy[a] = i * j * p(px, i - 1) * p(py, j - 1);
      m.dyy[a] = j * (j - 1) * px[i] * p(py, j - 2);
    }
  }
  return m;
}

Vec shifted_legendre(int n, double s) {
  Vec L(n + 1);
  const double t = 2.0 * s - 1.0;
  L[0] = 1.0;
  if (n >= 1) L[1] = t;
  for (int k = 2; k <= n; ++k) L[k] = ((2 * k - 1) * t * L[k - 1] - (k - 1) * L[k - 2]) / k;
  return L;
}

}  // namespace hdgbiot
