#include "hdgbiot/stability.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

namespace hdgbiot {

namespace {

Vec random_vec(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Vec x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

// Smallest eigenvalue of Z^T S Z y = mu Z^T M Z y.
Vec generalized_eigs(const Mat& S, const Mat& M, const Mat& Z) {
  const Mat Sz = Z.transpose() * S * Z;
  const Mat Mz = Z.transpose() * M * Z;
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(0.5 * (Sz + Sz.transpose()), 0.5 * (Mz + Mz.transpose()));
  if (es.info() != Eigen::Success) throw std::runtime_error("generalized eigensolver failed");
  return es.eigenvalues();
}

double min_generalized_eig(const Mat& S, const Mat& M, const Mat& Z) { return generalized_eigs(S, M, Z).minCoeff(); }

// Orthonormal basis of the orthogonal complement of span{v}.
Mat complement(const Vec& v) {
  Eigen::HouseholderQR<Mat> qr(v.normalized());
  const Mat Q = qr.householderQ();
  return Q.rightCols(v.size() - 1);
}

}  // namespace

RatioStats sample_coercivity(const SpaceSet& s, double eta, int samples, std::uint64_t seed) {
  ScaledParams p;
  p.lambda = 0.0;
  p.eta = eta;
  const SpMat A = assemble_hdg_elasticity(s, p);
  const NormMatrices N = assemble_norm_matrices(s);
  std::mt19937_64 rng(seed);
  RatioStats r{1e300, 0.0, samples};
  for (int k = 0; k < samples; ++k) {
    const Vec v = random_vec(A.rows(), rng);
    const double ratio = v.dot(A * v) / v.dot(N.hdg_u * v);
    r.min = std::min(r.min, ratio);
    r.max = std::max(r.max, ratio);
  }
  return r;
}

RatioStats sample_continuity(const SpaceSet& s, double eta, int samples, std::uint64_t seed) {
  ScaledParams p;
  p.lambda = 0.0;
  p.eta = eta;
  const SpMat A = assemble_hdg_elasticity(s, p);
  const NormMatrices N = assemble_norm_matrices(s);
  std::mt19937_64 rng(seed);
  RatioStats r{1e300, 0.0, samples};
  for (int k = 0; k < samples; ++k) {
    const Vec u = random_vec(A.rows(), rng), v = random_vec(A.rows(), rng);
    const double ratio = std::abs(u.dot(A * v)) / std::sqrt(u.dot(N.hdg_u * u) * v.dot(N.hdg_u * v));
    r.min = std::min(r.min, ratio);
    r.max = std::max(r.max, ratio);
  }
  return r;
}

RatioStats sample_b_continuity(const SpaceSet& s, int samples, std::uint64_t seed) {
  SpMat B_w, Bh_w;
  assemble_b_form(s, B_w, Bh_w);
  const NormMatrices N = assemble_norm_matrices(s);
  std::mt19937_64 rng(seed);
  RatioStats r{1e300, 0.0, samples};
  for (int k = 0; k < samples; ++k) {
    const Vec z = random_vec(s.W.ndof, rng);
    const Vec q = random_vec(s.P.ndof, rng), qh = random_vec(s.Phat.ndof, rng);
    const double b = q.dot(B_w * z) + qh.dot(Bh_w * z);
    const double ratio = std::abs(b) / std::sqrt(z.dot(N.w_l2 * z) * quad_form(N.hdg_p, stack(q, qh)));
    r.min = std::min(r.min, ratio);
    r.max = std::max(r.max, ratio);
  }
  return r;
}

std::pair<double, double> hdg_energy_spectrum(const SpaceSet& s, double eta) {
  ScaledParams p;
  p.lambda = 0.0;
  p.eta = eta;
  const Mat A = Mat(assemble_hdg_elasticity(s, p));
  const Mat N = Mat(assemble_norm_matrices(s).hdg_u);
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(A, N);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

double stokes_inf_sup(const SpaceSet& s) {
  const Mesh& m = *s.mesh;
  const Mat B = Mat(assemble_div_coupling(s));
  const Mat N = Mat(assemble_norm_matrices(s).hdg_u);
  const Mat M = Mat(assemble_mass(m, s.P, 1.0));
  const Mat S = B * N.ldlt().solve(B.transpose());
  // M-orthogonal complement of the constants
  const Vec one = interpolate_scalar(m, s.P, [](const Point&) { return 1.0; });
  const Mat Z = complement(M * one);
  return std::sqrt(std::max(0.0, min_generalized_eig(S, M, Z)));
}

namespace {

// B M_z^{-1} B^T and the HDG pressure norm, restricted to the complement of
// the constant pair.
struct DarcyPairing {
  Mat S, N, Z;
};

DarcyPairing darcy_pairing(const SpaceSet& s) {
  const Mesh& m = *s.mesh;
  SpMat B_w, Bh_w;
  assemble_b_form(s, B_w, Bh_w);
  const int np = s.P.ndof, nh = s.Phat.ndof;
  Mat B(np + nh, s.W.ndof);
  B << Mat(B_w), Mat(Bh_w);
  const Mat Mz = Mat(assemble_mass(m, s.W, 1.0));
  const Mat N = Mat(assemble_norm_matrices(s).hdg_p);
  const Mat S = B * Mz.llt().solve(B.transpose());
  const Vec one = stack(interpolate_scalar(m, s.P, [](const Point&) { return 1.0; }),
                        interpolate_facet_scalar(m, s.Phat, [](const Point&) { return 1.0; }));
  return {S, N, complement(one)};
}

}  // namespace

double darcy_inf_sup(const SpaceSet& s) {
  const DarcyPairing d = darcy_pairing(s);
  return std::sqrt(std::max(0.0, min_generalized_eig(d.S, d.N, d.Z)));
}

double b_continuity_constant(const SpaceSet& s) {
  const DarcyPairing d = darcy_pairing(s);
  return std::sqrt(std::max(0.0, generalized_eigs(d.S, d.N, d.Z).maxCoeff()));
}

}  // namespace hdgbiot
