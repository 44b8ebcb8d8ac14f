#include "hdgbiot/condense.hpp"

#include <cmath>

namespace hdgbiot {

namespace {

std::vector<int> numbered(std::span<const int> d, int offset = 0) {
  std::vector<int> out;
  for (int i : d) {
    if (i >= 0) out.push_back(i + offset);
  }
  return out;
}

Eigen::LLT<Mat> factor(const Mat& K, int cell, const char* what) {
  Eigen::LLT<Mat> llt(K);
  const double rc = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
  if (llt.info() != Eigen::Success || !(rc > 1e-14)) {
    throw SingularLocalBlock(cell, rc, std::string("singular local block ") + what + " on cell " + std::to_string(cell) +
                                           " (rcond " + std::to_string(rc) + ")");
  }
  return llt;
}

void scatter_dense(Triplets& t, const std::vector<int>& rows, const std::vector<int>& cols, const Mat& K) {
  for (int j = 0; j < K.cols(); ++j)
    for (int i = 0; i < K.rows(); ++i)
      if (K(i, j) != 0.0) t.emplace_back(rows[i], cols[j], K(i, j));
}

SpMat from_triplets(int r, int c, const Triplets& t) {
  SpMat A(r, c);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

LocalFactors local_factors(const BlockSystem& b, const SpaceSet& s, const SpMat& mass, int c) {
  LocalFactors L;
  L.u = numbered(s.U.dofs(c));
  L.w = numbered(s.W.dofs(c));
  L.p = numbered(s.P.dofs(c));
  L.phat = numbered(s.Phat.dofs(c));
  L.Mw = factor(extract_block(b.M_w, L.w, L.w), c, "M_w");
  L.Bu = extract_block(b.B_u, L.p, L.u);
  L.Bw = extract_block(b.B_w, L.p, L.w);
  L.Bh = extract_block(b.Bhat_w, L.phat, L.w);
  const Mat MiBw = L.Mw.solve(L.Bw.transpose());
  L.D = factor(extract_block(mass, L.p, L.p) + L.Bw * MiBw, c, "M_p + B_w M_w^-1 B_w^T");
  L.E = MiBw.transpose() * L.Bh.transpose();
  return L;
}

Mat local_c(const LocalFactors& L) {
  return L.Bh * L.Mw.solve(L.Bh.transpose()) - L.E.transpose() * L.D.solve(L.E);
}

}  // namespace

Mat extract_block(const SpMat& A, const std::vector<int>& rows, const std::vector<int>& cols) {
  Mat K = Mat::Zero(rows.size(), cols.size());
  for (size_t j = 0; j < cols.size(); ++j) {
    for (SpMat::InnerIterator it(A, cols[j]); it; ++it) {
      for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] == it.row()) {
          K(i, j) = it.value();
          break;
        }
      }
    }
  }
  return K;
}

CondensedSystem condense(const BlockSystem& b, const SpaceSet& s) {
  CondensedSystem cs;
  cs.n_ubar = b.n_ubar();
  cs.n_w = b.n_w();
  cs.n_p = b.n_p();
  cs.n_phat = b.n_phat();
  const int nc = s.mesh->num_cells();
  cs.cells.reserve(nc);
  Triplets ta, tb, tc;
  for (int c = 0; c < nc; ++c) {
    LocalFactors L = local_factors(b, s, b.M_p, c);
    const Mat DiBu = L.D.solve(L.Bu);
    scatter_dense(ta, L.u, L.u, L.Bu.transpose() * DiBu);
    scatter_dense(tb, L.phat, L.u, -L.E.transpose() * DiBu);
    scatter_dense(tc, L.phat, L.phat, local_c(L));
    cs.cells.push_back(std::move(L));
  }
  cs.A = b.A_ubar + from_triplets(cs.n_ubar, cs.n_ubar, ta);
  cs.B = from_triplets(cs.n_phat, cs.n_ubar, tb);
  cs.C = from_triplets(cs.n_phat, cs.n_phat, tc);
  return cs;
}

SpMat CondensedSystem::matrix() const {
  Triplets t;
  t.reserve(A.nonZeros() + 2 * B.nonZeros() + C.nonZeros());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < B.outerSize(); ++k)
    for (SpMat::InnerIterator it(B, k); it; ++it) {
      t.emplace_back(n_ubar + it.row(), it.col(), it.value());
      t.emplace_back(it.col(), n_ubar + it.row(), it.value());
    }
  for (int k = 0; k < C.outerSize(); ++k)
    for (SpMat::InnerIterator it(C, k); it; ++it) t.emplace_back(n_ubar + it.row(), n_ubar + it.col(), -it.value());
  return from_triplets(size(), size(), t);
}

Vec CondensedSystem::reduce_rhs(const Vec& f, const Vec& g, const Vec& flux) const {
  Vec r(size());
  r << f, flux;
  for (const auto& L : cells) {
    Vec gl(L.p.size());
    for (size_t i = 0; i < L.p.size(); ++i) gl[i] = g[L.p[i]];
    const Vec Dg = L.D.solve(gl);
    const Vec ru = L.Bu.transpose() * Dg;
    const Vec rh = -L.E.transpose() * Dg;
    for (size_t i = 0; i < L.u.size(); ++i) r[L.u[i]] += ru[i];
    for (size_t i = 0; i < L.phat.size(); ++i) r[n_ubar + L.phat[i]] += rh[i];
  }
  return r;
}

void CondensedSystem::recover(const Vec& x, const Vec& g, Vec& w, Vec& p) const {
  w = Vec::Zero(n_w);
  p = Vec::Zero(n_p);
  for (const auto& L : cells) {
    Vec ul(L.u.size()), hl(L.phat.size()), gl(L.p.size());
    for (size_t i = 0; i < L.u.size(); ++i) ul[i] = x[L.u[i]];
    for (size_t i = 0; i < L.phat.size(); ++i) hl[i] = x[n_ubar + L.phat[i]];
    for (size_t i = 0; i < L.p.size(); ++i) gl[i] = g[L.p[i]];
    const Vec pl = L.D.solve(L.Bu * ul - L.E * hl - gl);
    const Vec wl = -L.Mw.solve(L.Bw.transpose() * pl + L.Bh.transpose() * hl);
    for (size_t i = 0; i < L.p.size(); ++i) p[L.p[i]] = pl[i];
    for (size_t i = 0; i < L.w.size(); ++i) w[L.w[i]] = wl[i];
  }
}

SpMat condensed_pressure_block(const BlockSystem& b, const SpaceSet& s, const SpMat& mass) {
  Triplets t;
  for (int c = 0; c < s.mesh->num_cells(); ++c) {
    const LocalFactors L = local_factors(b, s, mass, c);
    scatter_dense(t, L.phat, L.phat, local_c(L));
  }
  return from_triplets(b.n_phat(), b.n_phat(), t);
}

namespace {

template <class Local>
SpMat pressure_block(const BlockSystem& b, const SpaceSet& s, Local&& local) {
  Triplets t;
  for (int c = 0; c < s.mesh->num_cells(); ++c) {
    const std::vector<int> p = numbered(s.P.dofs(c));
    const std::vector<int> h = numbered(s.Phat.dofs(c));
    const Mat Bp = extract_block(b.B_p, h, p);
    scatter_dense(t, h, h, local(Bp, extract_block(b.A_p, p, p), extract_block(b.Mt_p, p, p), c));
  }
  return b.A_phat + from_triplets(b.n_phat(), b.n_phat(), t);
}

}  // namespace

SpMat pressure_block_printed(const BlockSystem& b, const SpaceSet& s) {
  return pressure_block(b, s, [](const Mat& Bp, const Mat& Ap, const Mat& Mt, int c) -> Mat {
    const Mat BpT = Bp.transpose();
    return Bp * (factor(Mt, c, "Mt_p").solve(BpT) + factor(Ap, c, "A_p").solve(BpT));
  });
}

SpMat pressure_block_schur(const BlockSystem& b, const SpaceSet& s) {
  return pressure_block(b, s, [](const Mat& Bp, const Mat& Ap, const Mat& Mt, int c) -> Mat {
    return -Bp * factor(Mt + Ap, c, "Mt_p + A_p").solve(Mat(Bp.transpose()));
  });
}

}  // namespace hdgbiot
