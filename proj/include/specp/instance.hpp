#pragma once

#include "specp/noise.hpp"
#include "specp/spectral.hpp"
#include "specp/types.hpp"

#include <cmath>

namespace specp {

// A symmetric denoising instance: ground truth, noise, observation, and the
// measured model parameters the theory is phrased in. lambdastar(r-1) is
// kept positive: when the r-th eigenvalue by magnitude is negative, M* and
// M are jointly negated (the noise stays mean zero) and `flipped` records it.
struct Instance {
  SymMatrix mstar;
  SymMatrix e;
  SymMatrix m;
  Subspace ustar;
  Vector lambdastar;        // top-r, magnitude order, signed
  double lambda_r1_abs = 0; // |lambda_{r+1}(M*)|, zero for an exact rank-r truth
  Eigen::Index r = 1;
  double sigma = 0;
  double bound = 0;         // per-entry magnitude bound B
  double mu = 1;            // measured incoherence of ustar
  double kappa = 1;
  bool flipped = false;

  Eigen::Index n() const { return mstar.dim(); }
  double lambda_r() const { return lambdastar(r - 1); }
  double lambda_1_abs() const { return std::abs(lambdastar(0)); }
  double gap_star() const { return std::abs(lambdastar(r - 1)) - lambda_r1_abs; }
};

inline Instance make_instance(const InstanceSpec& spec) {
  GroundTruth gt = make_ground_truth(spec);
  SymMatrix e = sample_symmetric_noise(spec.noise, spec.n);

  Instance inst;
  inst.flipped = gt.lambdastar(spec.r - 1) < 0;
  if (inst.flipped) {
    inst.mstar = -gt.mstar;
    inst.e = -e;
    inst.lambdastar = -gt.lambdastar;
  } else {
    inst.mstar = gt.mstar;
    inst.e = e;
    inst.lambdastar = gt.lambdastar;
  }
  inst.m = SymMatrix::from_symmetric_unchecked(inst.mstar.mat() + inst.e.mat());
  inst.ustar = gt.ustar;
  inst.lambda_r1_abs = 0;
  inst.r = spec.r;
  inst.sigma = spec.noise.sigma;
  inst.bound = spec.noise.bound_for(spec.n);
  inst.mu = measured_incoherence(gt.ustar.basis());
  inst.kappa = std::abs(inst.lambdastar(0)) / std::abs(inst.lambdastar(spec.r - 1));
  return inst;
}

// Build an instance from explicit matrices (the truth may have nonzero
// trailing eigenvalues; the generalized eigengap is recorded).
inline Instance instance_from_parts(const SymMatrix& mstar, const SymMatrix& e, Eigen::Index r,
                                    double sigma, double bound) {
  require(mstar.dim() == e.dim(), "instance_from_parts: dimension mismatch");
  require(r >= 1 && r <= mstar.dim(), "instance_from_parts: rank out of range");

  SpectralDecomposition d = eig_by_magnitude(mstar);
  require(std::abs(d.eigenvalues(r - 1)) > 0, "instance_from_parts: lambda_r of the truth vanishes");

  const bool flip = d.eigenvalues(r - 1) < 0;
  Instance inst;
  inst.flipped = flip;
  inst.mstar = flip ? -mstar : mstar;
  inst.e = flip ? -e : e;
  if (flip) d = eig_by_magnitude(inst.mstar);

  inst.m = SymMatrix::from_symmetric_unchecked(inst.mstar.mat() + inst.e.mat());
  inst.ustar = Subspace(d.eigenvectors.leftCols(r));
  inst.lambdastar = d.eigenvalues.head(r);
  inst.lambda_r1_abs = r < mstar.dim() ? std::abs(d.eigenvalues(r)) : 0.0;
  inst.r = r;
  inst.sigma = sigma;
  inst.bound = bound;
  inst.mu = measured_incoherence(inst.ustar.basis());
  inst.kappa = std::abs(inst.lambdastar(0)) / std::abs(inst.lambdastar(r - 1));
  return inst;
}

}  // namespace specp
