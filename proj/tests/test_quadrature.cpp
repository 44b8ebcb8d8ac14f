#include "hdgbiot/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace hdgbiot;

namespace {

// int_T x^i y^j over the reference triangle = i! j! / (i+j+2)!
double exact_triangle(int i, int j) {
  return std::tgamma(i + 1) * std::tgamma(j + 1) / std::tgamma(i + j + 3);
}

}  // namespace

TEST(Quadrature, Examples) {
  const auto& t0 = triangle_rule(0);
  double s = 0.0;
  for (double w : t0.weights) s += w;
  EXPECT_NEAR(s, 0.5, 1e-15);

  const auto& e3 = edge_rule(3);
  double v = 0.0;
  for (int q = 0; q < e3.size(); ++q) v += e3.weights[q] * std::pow(e3.points[q].x(), 3);
  EXPECT_NEAR(v, 0.25, 1e-14);

  const auto& t6 = triangle_rule(6);
  double m = 0.0;
  for (int q = 0; q < t6.size(); ++q) m += t6.weights[q] * std::pow(t6.points[q].x(), 2) * std::pow(t6.points[q].y(), 4);
  // 2! 4! / 8! = 1/840
  EXPECT_NEAR(m, 1.0 / 840.0, 1e-15);
}

TEST(Quadrature, UnsupportedDegree) {
  EXPECT_THROW(triangle_rule(kMaxQuadratureDegree + 1), UnsupportedDegree);
  EXPECT_THROW(edge_rule(-1), InvalidArgument);
}

class MonomialExactness : public ::testing::TestWithParam<int> {};

TEST_P(MonomialExactness, Triangle) {
  const int d = GetParam();
  const auto& r = triangle_rule(d);
  EXPECT_GE(r.exact_degree, d);
  double wsum = 0.0;
  for (int q = 0; q < r.size(); ++q) {
    EXPECT_GT(r.weights[q], 0.0);
    wsum += r.weights[q];
  }
  EXPECT_NEAR(wsum, 0.5, 1e-14);
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; i + j <= d; ++j) {
      double v = 0.0;
      for (int q = 0; q < r.size(); ++q) v += r.weights[q] * std::pow(r.points[q].x(), i) * std::pow(r.points[q].y(), j);
      EXPECT_NEAR(v, exact_triangle(i, j), 1e-13) << "x^" << i << " y^" << j;
    }
  }
}

TEST_P(MonomialExactness, Edge) {
  const int d = GetParam();
  const auto& r = edge_rule(d);
  double wsum = 0.0;
  for (double w : r.weights) wsum += w;
  EXPECT_NEAR(wsum, 1.0, 1e-14);
  for (int i = 0; i <= d; ++i) {
    double v = 0.0;
    for (int q = 0; q < r.size(); ++q) v += r.weights[q] * std::pow(r.points[q].x(), i);
    EXPECT_NEAR(v, 1.0 / (i + 1), 1e-13);
  }
}

// 2 l_max + 4 with l_max = 4 must be supported
INSTANTIATE_TEST_SUITE_P(Degrees, MonomialExactness, ::testing::Values(0, 1, 2, 3, 5, 8, 12, 16, 20));

TEST(Quadrature, EdgeRuleSymmetric) {
  for (int d : {1, 4, 9, 20}) {
    const auto& r = edge_rule(d);
    for (int q = 0; q < r.size(); ++q) EXPECT_NEAR(r.points[q].x(), 1.0 - r.points[r.size() - 1 - q].x(), 1e-15);
  }
}
