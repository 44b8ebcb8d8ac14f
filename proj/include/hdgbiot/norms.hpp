#pragma once

#include "hdgbiot/forms.hpp"
#include "hdgbiot/spaces.hpp"

namespace hdgbiot {

/// Gram matrices of the parameter-free pieces of the discrete norms.
///
///   hdg_u : sum_T |v|_1^2 + h_T^{-1} ||(vhat - v)_t||^2_dT + h_T^2 |v|_2^2   on ubar
///   div_u : ||div v||^2                                                  on ubar
///   w_l2  : ||z||^2                                                      on W
///   hdg_p : sum_T |q|_1^2 + h_T^{-1} ||qhat - q||^2_dT + h_T^2 |q|_2^2     on (P, Phat)
///   p_l2  : ||q||^2                                                      on P
struct NormMatrices {
  SpMat hdg_u;
  SpMat div_u;
  SpMat w_l2;
  SpMat hdg_p;
  SpMat p_l2;
};

NormMatrices assemble_norm_matrices(const SpaceSet& s);

struct NormValues {
  double hdg_u = 0.0;   // ||(v, vhat)||_HDG
  double ubar = 0.0;    // sqrt(HDG^2 + lambda ||div v||^2)
  double w_minus = 0.0; // sqrt(R^{-1}) ||z||
  double hdg_p = 0.0;   // ||(q, qhat)||_HDG
  double pbar = 0.0;    // sqrt(R HDG^2 + gamma ||q||^2)
};

NormValues evaluate_norms(const NormMatrices& N, const ScaledParams& p, const Vec& ubar, const Vec& w, const Vec& q,
                          const Vec& qhat);

/// x^T A x, clamped at zero against round-off.
double quad_form(const SpMat& A, const Vec& x);

/// Stacks (q, qhat) into one vector in the layout of hdg_p.
Vec stack(const Vec& a, const Vec& b);

}  // namespace hdgbiot
