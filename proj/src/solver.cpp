#include "hdgbiot/solver.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

namespace hdgbiot {

Vec minres(const Operator& K, const Operator& M, const Vec& b, double tol, int maxit, SolveReport& rep) {
  const auto t0 = std::chrono::steady_clock::now();
  rep = SolveReport{};
  rep.method = "minres";
  const int n = static_cast<int>(b.size());
  Vec x = Vec::Zero(n);
  Vec r1 = b, y = M(r1);
  const double yr = r1.dot(y);
  if (yr < 0.0) throw InvalidArgument("minres: preconditioner is not positive definite");
  const double beta1 = std::sqrt(yr);
  if (beta1 == 0.0) {
    rep.converged = true;
    return x;
  }
  Vec r2 = r1, v(n), w = Vec::Zero(n), w1(n), w2 = Vec::Zero(n);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1, cs = -1.0, sn = 0.0;
  std::vector<double> alphas, betas;
  for (int it = 1; it <= maxit; ++it) {
    v = y / beta;
    y = K(v);
    if (it >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1.swap(r2);
    r2 = y;
    y = M(r2);
    oldb = beta;
    const double bb = r2.dot(y);
    if (bb < 0.0) throw InvalidArgument("minres: preconditioner is not positive definite");
    beta = std::sqrt(bb);
    alphas.push_back(alfa);
    betas.push_back(beta);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), std::numeric_limits<double>::min());
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1.swap(w2);
    w2.swap(w);
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;

    rep.iterations = it;
    rep.history.push_back(phibar / beta1);
    if (phibar <= tol * beta1) {
      rep.converged = true;
      break;
    }
    if (beta == 0.0) break;  // invariant subspace found
  }
  rep.residual = phibar / beta1;
  const double bn = b.norm();
  rep.true_residual = bn > 0 ? (b - K(x)).norm() / bn : 0.0;

  const int k = static_cast<int>(alphas.size());
  if (k > 0) {
    Vec diag = Eigen::Map<Vec>(alphas.data(), k);
    Vec sub = k > 1 ? Vec(Eigen::Map<Vec>(betas.data(), k - 1)) : Vec(0);
    Eigen::SelfAdjointEigenSolver<Mat> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    rep.ritz_min_abs = es.eigenvalues().cwiseAbs().minCoeff();
    rep.ritz_max_abs = es.eigenvalues().cwiseAbs().maxCoeff();
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return x;
}

void write_history(std::ostream& os, const SolveReport& r) {
  os << "iteration,relative_residual\n";
  os.precision(10);
  for (size_t i = 0; i < r.history.size(); ++i) os << i + 1 << ',' << r.history[i] << '\n';
}

std::string to_string(PrecondKind k) {
  switch (k) {
    case PrecondKind::None: return "none";
    case PrecondKind::P1: return "p1";
    case PrecondKind::P1Schur: return "p1-schur";
    case PrecondKind::P2: return "p2";
  }
  return "?";
}

PrecondKind parse_precond(const std::string& name) {
  for (PrecondKind k : {PrecondKind::None, PrecondKind::P1, PrecondKind::P1Schur, PrecondKind::P2})
    if (to_string(k) == name) return k;
  throw InvalidArgument("unknown preconditioner '" + name + "'");
}

Preconditioner Preconditioner::build(PrecondKind kind, const BlockSystem& b, const SpaceSet& s, const CondensedSystem& cs,
                                     DisplacementBlock ublock) {
  Preconditioner P;
  P.kind_ = kind;
  P.n_ubar_ = cs.n_ubar;
  if (kind == PrecondKind::None) return P;
  P.u_.compute(ublock == DisplacementBlock::Condensed ? cs.A : b.A_ubar, "displacement block");
  switch (kind) {
    case PrecondKind::P1: P.p_.compute(pressure_block_printed(b, s), "pressure block (P1)"); break;
    case PrecondKind::P1Schur: P.p_.compute(pressure_block_schur(b, s), "pressure block (P1 Schur)"); break;
    case PrecondKind::P2: P.p_.compute(condensed_pressure_block(b, s, b.Mt_p), "pressure block (P2)"); break;
    case PrecondKind::None: break;
  }
  return P;
}

Vec Preconditioner::apply(const Vec& x) const {
  if (kind_ == PrecondKind::None) return x;
  Vec y(x.size());
  y.head(n_ubar_) = u_.solve(x.head(n_ubar_));
  y.tail(x.size() - n_ubar_) = p_.solve(x.tail(x.size() - n_ubar_));
  return y;
}

MeanData mean_data(const SpaceSet& s) {
  const Mesh& m = *s.mesh;
  MeanData d;
  const ScalarFn one = [](const Point&) { return 1.0; };
  d.p_one = interpolate_scalar(m, s.P, one);
  d.phat_one = interpolate_facet_scalar(m, s.Phat, one);
  d.p_weights = assemble_mass(m, s.P, 1.0) * d.p_one;
  d.area = m.total_area();
  return d;
}

double pressure_mean(const MeanData& d, const Vec& p) { return d.p_weights.dot(p) / d.area; }

Compatibility make_compatible(const MeanData& d, Vec& g, const Vec& flux) {
  Compatibility c;
  c.mismatch = d.p_one.dot(g) + d.phat_one.dot(flux);
  const double scale = d.p_one.cwiseProduct(g).cwiseAbs().sum() + d.phat_one.cwiseProduct(flux).cwiseAbs().sum();
  c.warning = std::abs(c.mismatch) > 1e-6 * std::max(scale, 1.0);
  g -= (c.mismatch / d.area) * d.p_weights;
  return c;
}

void shift_pressure(const MeanData& d, double c, Vec& p, Vec& phat) {
  p += c * d.p_one;
  phat += c * d.phat_one;
}

StaticSolution solve_static(const BlockSystem& b, const SpaceSet& s, const SolveOptions& opt) {
  StaticSolution sol;
  const MeanData md = mean_data(s);
  const bool singular = b.params.S == 0.0;
  Vec g = b.g;
  if (singular) sol.compat = make_compatible(md, g, b.flux);

  const CondensedSystem cs = condense(b, s);
  const Vec rhs = cs.reduce_rhs(b.f, g, b.flux);
  const SpMat K = cs.matrix();
  Vec x;
  if (opt.direct) {
    const auto t0 = std::chrono::steady_clock::now();
    x = solve_direct(K, rhs, singular ? std::optional<int>(cs.n_ubar) : std::nullopt);
    sol.report.method = "direct";
    sol.report.converged = true;
    const double bn = rhs.norm();
    sol.report.true_residual = bn > 0 ? (rhs - K * x).norm() / bn : 0.0;
    sol.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  } else {
    const Preconditioner P = Preconditioner::build(opt.precond, b, s, cs, opt.ublock);
    x = minres([&](const Vec& v) { return Vec(K * v); }, [&](const Vec& v) { return P.apply(v); }, rhs, opt.tol,
               opt.maxit, sol.report);
  }
  sol.ubar = x.head(cs.n_ubar);
  sol.phat = x.tail(cs.n_phat);
  cs.recover(x, g, sol.w, sol.p);
  sol.p_mean = pressure_mean(md, sol.p);
  if (singular) shift_pressure(md, -sol.p_mean, sol.p, sol.phat);
  return sol;
}

}  // namespace hdgbiot
