#pragma once

#include "specp/alignment.hpp"
#include "specp/instance.hpp"
#include "specp/spectral.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <vector>

namespace specp {

// E with the noise in row/column l discarded.
inline SymMatrix leave_one_out(const SymMatrix& e, Eigen::Index l) {
  require(l >= 0 && l < e.dim(), "leave_one_out: index out of range");
  Matrix el = e.mat();
  el.row(l).setZero();
  el.col(l).setZero();
  return SymMatrix::from_symmetric_unchecked(std::move(el));
}

// ||M - M^(l)||: the difference lives on row/column l, so its spectral norm
// has the closed form (|E_ll| + sqrt(E_ll^2 + 4 s^2)) / 2 with s the norm of
// the off-diagonal part of the l-th column.
inline double leave_one_out_move_norm(const SymMatrix& e, Eigen::Index l) {
  const Vector col = e.mat().col(l);
  const double diag = col(l);
  const double s2 = col.squaredNorm() - diag * diag;
  return (std::abs(diag) + std::sqrt(diag * diag + 4.0 * s2)) / 2.0;
}

struct LooEntry {
  Vector lambda;            // top-r eigenvalues of M^(l), magnitude order
  Matrix u;                 // eigenvectors for lambda
  Matrix h;                 // U^(l)^T U*
  double lambda_r1_abs = 0; // |lambda_{r+1}(M^(l))|
  double gap = 0;           // |lambda_r^(l)| - |lambda_{r+1}^(l)|
  double move_norm = 0;     // ||M - M^(l)||
  double e_spectral = 0;    // ||E^(l)||
};

struct LooEnsemble {
  std::vector<LooEntry> entries;
  Eigen::Index r = 0;
};

inline LooEnsemble build_ensemble(const SymMatrix& mstar, const SymMatrix& e, Eigen::Index r,
                                  const Subspace& ustar) {
  require(mstar.dim() == e.dim(), "build_ensemble: dimension mismatch");
  require(r >= 1 && r <= mstar.dim(), "build_ensemble: rank out of range");
  const Eigen::Index n = mstar.dim();
  LooEnsemble ens;
  ens.r = r;
  ens.entries.resize(static_cast<std::size_t>(n));
  for (Eigen::Index l = 0; l < n; ++l) {
    const SymMatrix el = leave_one_out(e, l);
    const SymMatrix ml = SymMatrix::from_symmetric_unchecked(mstar.mat() + el.mat());
    const SpectralDecomposition d = eig_by_magnitude(ml);

    LooEntry& entry = ens.entries[static_cast<std::size_t>(l)];
    entry.lambda = d.eigenvalues.head(r);
    entry.u = d.eigenvectors.leftCols(r);
    entry.h = entry.u.transpose() * ustar.basis();
    entry.lambda_r1_abs = r < n ? std::abs(d.eigenvalues(r)) : 0.0;
    entry.gap = std::abs(d.eigenvalues(r - 1)) - entry.lambda_r1_abs;
    entry.move_norm = leave_one_out_move_norm(e, l);
    Eigen::SelfAdjointEigenSolver<Matrix> esolve(el.mat(), Eigen::EigenvaluesOnly);
    entry.e_spectral = esolve.eigenvalues().cwiseAbs().maxCoeff();
  }
  return ens;
}

inline LooEnsemble build_ensemble(const Instance& inst) {
  return build_ensemble(inst.mstar, inst.e, inst.r, inst.ustar);
}

// Spectral estimate of an instance with everything the proof bookkeeping
// touches: the alignment matrix H, its polar factor, and the principal-angle
// sines read off the singular values of H.
struct Estimate {
  Matrix u;        // top-r eigenvectors of M
  Vector lambda;   // top-r eigenvalues, magnitude order
  double lambda_r1_abs = 0;
  Matrix h;        // U^T U*
  Matrix sgn_h;
  Vector h_singular_values;  // descending
  bool h_singular = false;
  double sin_theta = 0;      // ||sin Theta||
  double sin_theta_fro = 0;  // ||sin Theta||_F
  double h_inv_norm = 0;     // ||H^{-1}|| (infinity when singular)
  double h_minus_sgn = 0;    // ||H - sgn(H)||
};

inline Estimate compute_estimate(const Instance& inst) {
  const SpectralDecomposition d = eig_by_magnitude(inst.m);
  Estimate est;
  const Eigen::Index r = inst.r;
  est.u = d.eigenvectors.leftCols(r);
  est.lambda = d.eigenvalues.head(r);
  est.lambda_r1_abs = r < inst.n() ? std::abs(d.eigenvalues(r)) : 0.0;
  est.h = est.u.transpose() * inst.ustar.basis();

  Eigen::JacobiSVD<Matrix> svd(est.h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  est.sgn_h = svd.matrixU() * svd.matrixV().transpose();
  est.h_singular_values = svd.singularValues();
  const double smin = est.h_singular_values(r - 1);
  est.h_singular = !(smin > 1e-12);
  est.h_inv_norm = est.h_singular ? std::numeric_limits<double>::infinity() : 1.0 / smin;

  // ||sin Theta|| via the projected residual (I - U U^T) U* = U* - U H;
  // this stays accurate for tiny angles where 1 - cos^2 would lose half
  // the precision.
  const Matrix residual = inst.ustar.basis() - est.u * est.h;
  est.sin_theta = Eigen::JacobiSVD<Matrix>(residual).singularValues()(0);
  est.sin_theta_fro = residual.norm();
  est.h_minus_sgn = Eigen::JacobiSVD<Matrix>(est.h - est.sgn_h).singularValues()(0);
  return est;
}

// ---------------------------------------------------------------------------
// Proof bookkeeping quantities
// ---------------------------------------------------------------------------

struct ProofQuantities {
  double e1 = 0;   // 2 ||M (UH - U*)||_{2,inf} / lambda_r*
  double e2 = 0;   // 4 ||M U*||_{2,inf} ||E|| / lambda_r*^2
  double e3 = 0;   // ||E U*||_{2,inf} / lambda_r*
  double e11 = 0;  // 2 (alpha0 + alpha1 + alpha2) / lambda_r*
  double rho1 = 0; // 2 c4 (sigma sqrt(n) + B log n) / lambda_r*
  double alpha0 = 0;
  double alpha1 = 0;
  double alpha2 = 0;
  std::vector<double> per_l_surrogate;  // ||UH - U^(l) H^(l)||_F
  std::vector<double> per_l_row;        // ||E_{l,.} (U^(l) H^(l) - U*)||_2
  double uh_minus_ustar_2inf = 0;
  double uh_minus_firstorder_2inf = 0;
  double usgnh_minus_ustar_2inf = 0;
  double usgnh_minus_firstorder_2inf = 0;
  bool alignment_degenerate = false;  // H or some H^(l) numerically singular
};

struct ProofConstants {
  double c2 = 3.0;   // spectral-norm concentration constant (calibrated default)
  double c4 = 10.0;  // contraction constant in rho1
};

// Scalar bookkeeping only; the per-leave-one-out vectors stay empty. Useful
// at large n where the ensemble is too expensive.
inline ProofQuantities proof_scalar_quantities(const Instance& inst, const Estimate& est,
                                               const ProofConstants& consts = {}) {
  require(inst.lambda_r() > 0, "proof_quantities: lambda_r* must be positive");
  const Eigen::Index n = inst.n();
  const Eigen::Index r = inst.r;
  const double lr = inst.lambda_r();
  const double log_n = std::log(static_cast<double>(n));
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  const Matrix& ustar = inst.ustar.basis();
  const Matrix uh = est.u * est.h;
  const Matrix diff = uh - ustar;

  ProofQuantities q;
  q.alignment_degenerate = est.h_singular;

  const double e_spec = spectral_norm(inst.e.mat());
  const double m_diff_2inf = two_inf_norm(inst.m.mat() * diff);
  const double mu_star_2inf = two_inf_norm(inst.m.mat() * ustar);
  const double eu_2inf = two_inf_norm(inst.e.mat() * ustar);

  q.e1 = 2.0 * m_diff_2inf / lr;
  q.e2 = 4.0 * mu_star_2inf * e_spec / (lr * lr);
  q.e3 = eu_2inf / lr;

  q.alpha0 = (32.0 * consts.c2 * inst.sigma * sqrt_n + 320.0 * inst.bound * log_n) / lr *
             (eu_2inf + e_spec * two_inf_norm(ustar));
  q.alpha1 = 6.0 * inst.sigma * std::sqrt(log_n) * diff.norm();
  q.alpha2 = 4.0 * consts.c2 * consts.c2 * inst.kappa * inst.sigma * inst.sigma *
             std::sqrt(inst.mu * static_cast<double>(r) * static_cast<double>(n)) / lr;
  q.e11 = 2.0 * (q.alpha0 + q.alpha1 + q.alpha2) / lr;
  q.rho1 = 2.0 * consts.c4 * (inst.sigma * sqrt_n + inst.bound * log_n) / lr;

  q.uh_minus_ustar_2inf = two_inf_norm(diff);
  const Matrix first_order = inst.m.mat() * ustar * inst.lambdastar.cwiseInverse().asDiagonal();
  q.uh_minus_firstorder_2inf = two_inf_norm(uh - first_order);
  const Matrix usgnh = est.u * est.sgn_h;
  q.usgnh_minus_ustar_2inf = two_inf_norm(usgnh - ustar);
  q.usgnh_minus_firstorder_2inf = two_inf_norm(usgnh - first_order);
  return q;
}

inline ProofQuantities proof_quantities(const Instance& inst, const LooEnsemble& ens,
                                        const Estimate& est, const ProofConstants& consts = {}) {
  ProofQuantities q = proof_scalar_quantities(inst, est, consts);
  const Eigen::Index n = inst.n();
  const Eigen::Index r = inst.r;
  const Matrix& ustar = inst.ustar.basis();
  const Matrix uh = est.u * est.h;

  q.per_l_surrogate.resize(static_cast<std::size_t>(n));
  q.per_l_row.resize(static_cast<std::size_t>(n));
  for (Eigen::Index l = 0; l < n; ++l) {
    const LooEntry& entry = ens.entries[static_cast<std::size_t>(l)];
    if (!(Eigen::JacobiSVD<Matrix>(entry.h).singularValues()(r - 1) > 1e-12))
      q.alignment_degenerate = true;
    const Matrix ul_hl = entry.u * entry.h;
    q.per_l_surrogate[static_cast<std::size_t>(l)] = (uh - ul_hl).norm();
    q.per_l_row[static_cast<std::size_t>(l)] = ((ul_hl - ustar).transpose() * inst.e.mat().row(l).transpose()).norm();
  }
  return q;
}

inline ProofQuantities proof_quantities(const Instance& inst, const LooEnsemble& ens,
                                        const ProofConstants& consts = {}) {
  return proof_quantities(inst, ens, compute_estimate(inst), consts);
}

// ---------------------------------------------------------------------------
// Exact decomposition identities (pure algebra; residuals are solver noise)
// ---------------------------------------------------------------------------

struct IdentityResidual {
  std::string name;
  double residual = 0;  // relative
  bool skipped = false;
};

// (a) U H Lam* = M U Lam^{-1} U^T U* Lam*
// (b) U H Lam* = M U* + M (U H - U*) - M U Lam^{-1} U^T E U*
// (c) H Lam* = Lam H - U^T E U*
// (d) rank-1 leave-one-out row identity  u^(l)_l = (lam*/lam^(l)) u*_l (u*^T u^(l))
inline std::vector<IdentityResidual> decomposition_identities(const Instance& inst,
                                                              const Estimate& est,
                                                              const LooEnsemble* ens = nullptr) {
  std::vector<IdentityResidual> out;
  const Eigen::Index r = inst.r;
  const Matrix& ustar = inst.ustar.basis();
  const Matrix& m = inst.m.mat();

  const double lam_max = est.lambda.cwiseAbs().maxCoeff();
  const bool lambda_singular = !(est.lambda.cwiseAbs().minCoeff() > 1e-12 * lam_max);

  const auto rel = [](const Matrix& res, const Matrix& ref) {
    return res.norm() / std::max(1.0, ref.norm());
  };

  const Matrix uh_lam = est.u * est.h * inst.lambdastar.asDiagonal();
  if (lambda_singular) {
    out.push_back({"uh-eigen-equation", 0.0, true});
    out.push_back({"uh-surrogate-split", 0.0, true});
  } else {
    const Matrix lam_inv = est.lambda.cwiseInverse().asDiagonal();
    const Matrix a = m * est.u * lam_inv * est.u.transpose() * ustar * inst.lambdastar.asDiagonal();
    out.push_back({"uh-eigen-equation", rel(uh_lam - a, uh_lam), false});

    const Matrix b = m * ustar + m * (est.u * est.h - ustar) -
                     m * est.u * lam_inv * est.u.transpose() * inst.e.mat() * ustar;
    out.push_back({"uh-surrogate-split", rel(uh_lam - b, uh_lam), false});
  }

  const Matrix c_lhs = est.h * inst.lambdastar.asDiagonal();
  const Matrix c_rhs = est.lambda.asDiagonal() * est.h - est.u.transpose() * inst.e.mat() * ustar;
  out.push_back({"h-commutation", rel(c_lhs - c_rhs, c_lhs), false});

  if (r == 1 && ens != nullptr) {
    double worst = 0;
    bool skipped = false;
    const double lam_star = inst.lambdastar(0);
    for (Eigen::Index l = 0; l < inst.n(); ++l) {
      const LooEntry& entry = ens->entries[static_cast<std::size_t>(l)];
      const double lam_l = entry.lambda(0);
      if (std::abs(lam_l) <= 1e-12 * std::abs(lam_star)) {
        skipped = true;
        continue;
      }
      const double lhs = entry.u(l, 0);
      const double rhs = lam_star / lam_l * ustar(l, 0) * ustar.col(0).dot(entry.u.col(0));
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    out.push_back({"rank1-loo-row", worst, skipped});
  }
  return out;
}

inline std::vector<IdentityResidual> decomposition_identities(const Instance& inst) {
  const Estimate est = compute_estimate(inst);
  if (inst.r == 1) {
    const LooEnsemble ens = build_ensemble(inst);
    return decomposition_identities(inst, est, &ens);
  }
  return decomposition_identities(inst, est, nullptr);
}

}  // namespace specp
