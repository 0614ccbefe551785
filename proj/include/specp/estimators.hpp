#pragma once

#include "specp/alignment.hpp"
#include "specp/spectral.hpp"
#include "specp/types.hpp"

#include <cmath>

namespace specp {

struct DenoiseResult {
  Subspace u;
  Vector lambda;          // magnitude-ordered
  Matrix reconstruction;  // U Lambda U^T
};

// Rank-r leading eigenspace of the observed matrix.
inline DenoiseResult denoise_symmetric(const SymMatrix& m, Eigen::Index r) {
  require(r >= 1 && r <= m.dim(), "denoise_symmetric: rank out of range");
  const SpectralDecomposition d = eig_by_magnitude(m);
  DenoiseResult res;
  res.u = Subspace(d.eigenvectors.leftCols(r));
  res.lambda = d.eigenvalues.head(r);
  res.reconstruction = res.u.basis() * res.lambda.asDiagonal() * res.u.basis().transpose();
  return res;
}

// M U* (Lambda*)^{-1} = U* + E U* (Lambda*)^{-1}, the linearization the
// row-wise theory certifies.
inline Matrix first_order_target(const SymMatrix& m, const Subspace& ustar, const Vector& lambdastar) {
  require(ustar.ambient_dim() == m.dim(), "first_order_target: dimension mismatch");
  require(lambdastar.size() == ustar.rank(), "first_order_target: eigenvalue count mismatch");
  require(lambdastar.cwiseAbs().minCoeff() > 0, "first_order_target: singular Lambda*");
  return m.mat() * ustar.basis() * lambdastar.cwiseInverse().asDiagonal();
}

struct CompletionResult {
  Subspace u;
  Subspace v;
  Vector sigma;     // descending, nonnegative
  Matrix estimate;  // U Sigma V^T
};

// Rank-r SVD of the inverse-probability-weighted observation matrix,
// computed through the symmetric dilation.
inline CompletionResult complete_matrix(const Matrix& mobs, Eigen::Index r) {
  require(r >= 1 && r <= std::min(mobs.rows(), mobs.cols()), "complete_matrix: rank out of range");
  DilationSvd svd = svd_by_dilation(mobs, r);
  CompletionResult res;
  res.estimate = svd.u.basis() * svd.sigma.asDiagonal() * svd.v.basis().transpose();
  res.u = std::move(svd.u);
  res.v = std::move(svd.v);
  res.sigma = std::move(svd.sigma);
  return res;
}

// Signs of the leading eigenvector; zero rounds to -1.
inline Eigen::VectorXi sbm_classify(const SymMatrix& m) {
  require(m.dim() % 2 == 0, "sbm_classify: even dimension required");
  const SpectralDecomposition d = eig_by_magnitude(m);
  Eigen::VectorXi labels(m.dim());
  for (Eigen::Index i = 0; i < m.dim(); ++i) labels(i) = d.eigenvectors(i, 0) > 0 ? 1 : -1;
  return labels;
}

// Agreement with the truth, maximized over the global flip.
inline double classification_accuracy(const Eigen::VectorXi& labels, const Eigen::VectorXi& truth) {
  require(labels.size() == truth.size(), "classification_accuracy: size mismatch");
  Eigen::Index agree = 0;
  for (Eigen::Index i = 0; i < labels.size(); ++i) agree += labels(i) == truth(i) ? 1 : 0;
  const double frac = static_cast<double>(agree) / static_cast<double>(labels.size());
  return std::max(frac, 1.0 - frac);
}

inline NormBundle error_report(const Matrix& estimate, const Matrix& truth) {
  require(estimate.rows() == truth.rows() && estimate.cols() == truth.cols(),
          "error_report: shape mismatch");
  return norms(estimate - truth);
}

}  // namespace specp
