#include "hdgbiot/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace hdgbiot {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = z;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

namespace {

void check_degree(int degree) {
  if (degree < 0) throw InvalidArgument("quadrature degree must be >= 0");
  if (degree > kMaxQuadratureDegree) {
    throw UnsupportedDegree("quadrature degree " + std::to_string(degree) + " exceeds maximum " +
                            std::to_string(kMaxQuadratureDegree));
  }
}

QuadRule make_edge_rule(int degree) {
  const int n = degree / 2 + 1;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadRule r;
  r.exact_degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    r.points.emplace_back(0.5 * (x[i] + 1.0), 0.0);
    r.weights.push_back(0.5 * w[i]);
  }
  return r;
}

QuadRule make_triangle_rule(int degree) {
  // The collapsed coordinate y = (1-a) b adds one degree in a.
  const int n = (degree + 2) / 2 + ((degree + 2) % 2);
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadRule r;
  r.exact_degree = degree;
  for (int i = 0; i < n; ++i) {
    const double a = 0.5 * (x[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      const double b = 0.5 * (x[j] + 1.0);
      r.points.emplace_back(a, (1.0 - a) * b);
      r.weights.push_back(0.25 * w[i] * w[j] * (1.0 - a));
    }
  }
  return r;
}

template <class Make>
const QuadRule& cached(std::map<int, QuadRule>& cache, std::mutex& mu, int degree, Make make) {
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(degree);
  if (it == cache.end()) it = cache.emplace(degree, make(degree)).first;
  return it->second;
}

}  // namespace

const QuadRule& edge_rule(int degree) {
  check_degree(degree);
  static std::map<int, QuadRule> cache;
  static std::mutex mu;
  return cached(cache, mu, degree, make_edge_rule);
}

const QuadRule& triangle_rule(int degree) {
  check_degree(degree);
  static std::map<int, QuadRule> cache;
  static std::mutex mu;
  return cached(cache, mu, degree, make_triangle_rule);
}

}  // namespace hdgbiot
