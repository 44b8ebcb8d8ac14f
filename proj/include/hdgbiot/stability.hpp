#pragma once

#include "hdgbiot/forms.hpp"
#include "hdgbiot/norms.hpp"

#include <cstdint>

namespace hdgbiot {

struct RatioStats {
  double min = 0.0;
  double max = 0.0;
  int samples = 0;
};

/// a_HDG(v, v) / ||v||_HDG^2 over random coefficient vectors (lambda = 0).
RatioStats sample_coercivity(const SpaceSet& s, double eta, int samples, std::uint64_t seed);
/// |a_HDG(u, v)| / (||u||_HDG ||v||_HDG) over random pairs (lambda = 0).
RatioStats sample_continuity(const SpaceSet& s, double eta, int samples, std::uint64_t seed);
/// |b((q, qhat), z)| / (||z||_0 ||(q, qhat)||_HDG) over random triples.
RatioStats sample_b_continuity(const SpaceSet& s, int samples, std::uint64_t seed);

/// Extreme generalized eigenvalues of a_HDG with respect to the HDG norm
/// (dense; for small meshes).
std::pair<double, double> hdg_energy_spectrum(const SpaceSet& s, double eta);

/// inf_q sup_v (div v, q) / (||v||_HDG ||q||_0) over q orthogonal to constants.
double stokes_inf_sup(const SpaceSet& s);
/// inf_(q,qhat) sup_z b((q,qhat), z) / (||z||_0 ||(q,qhat)||_HDG) on the
/// complement of the constant pair (the kernel of the HDG seminorm).
double darcy_inf_sup(const SpaceSet& s);
/// sup of the same quotient: the sharp constant behind sample_b_continuity.
double b_continuity_constant(const SpaceSet& s);

}  // namespace hdgbiot
