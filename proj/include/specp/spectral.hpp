#pragma once

#include "specp/types.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace specp {

namespace detail {

// Largest-magnitude coordinate made positive; ties resolved by lowest index.
inline void apply_sign_convention(Eigen::Ref<Vector> v) {
  Eigen::Index pivot = 0;
  double best = std::abs(v(0));
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best) {
      best = a;
      pivot = i;
    }
  }
  if (v(pivot) < 0) v = -v;
}

inline std::vector<Eigen::Index> magnitude_order(const Vector& values) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ma = std::abs(values(a));
    const double mb = std::abs(values(b));
    if (ma != mb) return ma > mb;
    return values(a) > values(b);  // magnitude tie: signed value descending
  });
  return idx;
}

}  // namespace detail

// Full eigendecomposition of a symmetric matrix with eigenpairs sorted by
// |lambda| descending. Deterministic for a fixed input.
inline SpectralDecomposition eig_by_magnitude(const SymMatrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s.mat());
  require(solver.info() == Eigen::Success, "eig_by_magnitude: eigensolver failed");
  const Vector raw_values = solver.eigenvalues();
  const Matrix raw_vectors = solver.eigenvectors();

  const auto order = detail::magnitude_order(raw_values);
  SpectralDecomposition d;
  d.source_dim = s.dim();
  d.eigenvalues.resize(s.dim());
  d.eigenvectors.resize(s.dim(), s.dim());
  for (Eigen::Index k = 0; k < s.dim(); ++k) {
    d.eigenvalues(k) = raw_values(order[static_cast<std::size_t>(k)]);
    d.eigenvectors.col(k) = raw_vectors.col(order[static_cast<std::size_t>(k)]);
    detail::apply_sign_convention(d.eigenvectors.col(k));
  }
  return d;
}

inline Subspace top_subspace(const SpectralDecomposition& d, Eigen::Index r) {
  require(r >= 1 && r <= d.source_dim, "top_subspace: rank out of range");
  return Subspace(d.eigenvectors.leftCols(r));
}

// Symmetric dilation [[0, A], [A^T, 0]] of a rectangular matrix. Its
// spectrum is {+sigma_i, -sigma_i} plus zeros, which turns singular
// structure into eigenstructure.
inline SymMatrix symmetric_dilation(const Matrix& a) {
  const auto n1 = a.rows();
  const auto n2 = a.cols();
  Matrix s = Matrix::Zero(n1 + n2, n1 + n2);
  s.topRightCorner(n1, n2) = a;
  s.bottomLeftCorner(n2, n1) = a.transpose();
  return SymMatrix::from_symmetric_unchecked(std::move(s));
}

struct DilationSvd {
  Subspace u;
  Vector sigma;
  Subspace v;
};

namespace detail {

// Deterministic completion of a partial orthonormal set with unit vectors
// orthogonal to the existing columns (used for zero singular values, whose
// dilation eigenvectors do not split into normalized halves).
inline Vector orthogonal_completion(const Matrix& partial, Eigen::Index ncols) {
  const Eigen::Index n = partial.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    Vector cand = Vector::Unit(n, k);
    for (Eigen::Index j = 0; j < ncols; ++j) cand -= partial.col(j).dot(cand) * partial.col(j);
    const double nrm = cand.norm();
    if (nrm > 0.5) return cand / nrm;
  }
  throw std::runtime_error("orthogonal_completion: no candidate found");
}

}  // namespace detail

// Rank-r truncated SVD computed through the eigendecomposition of the
// symmetric dilation; the r singular values are the r largest dilation
// eigenvalues.
inline DilationSvd svd_by_dilation(const Matrix& a, Eigen::Index r) {
  const auto n1 = a.rows();
  const auto n2 = a.cols();
  require(r >= 1 && r <= std::min(n1, n2), "svd_by_dilation: rank out of range");
  require(a.allFinite(), "svd_by_dilation: non-finite entry");

  const SpectralDecomposition d = eig_by_magnitude(symmetric_dilation(a));
  // Magnitude order with signed tie-break lists +sigma before -sigma, so the
  // r largest eigenvalues are the nonnegative entries among the leading pairs.
  std::vector<Eigen::Index> picked;
  for (Eigen::Index k = 0; k < d.source_dim && static_cast<Eigen::Index>(picked.size()) < r; ++k) {
    if (d.eigenvalues(k) >= 0) picked.push_back(k);
  }
  require(static_cast<Eigen::Index>(picked.size()) == r, "svd_by_dilation: could not extract r nonnegative eigenvalues");

  const double scale = std::abs(d.eigenvalues(0));
  const double zero_tol = 1e-12 * std::max(1.0, scale);

  Matrix u(n1, r), v(n2, r);
  Vector sigma(r);
  const double sqrt2 = std::sqrt(2.0);
  for (Eigen::Index j = 0; j < r; ++j) {
    const Eigen::Index k = picked[static_cast<std::size_t>(j)];
    sigma(j) = std::max(d.eigenvalues(k), 0.0);
    if (sigma(j) > zero_tol) {
      Vector top = d.eigenvectors.col(k).head(n1);
      Vector bottom = d.eigenvectors.col(k).tail(n2);
      u.col(j) = sqrt2 * top;
      v.col(j) = sqrt2 * bottom;
      u.col(j) /= u.col(j).norm();
      v.col(j) /= v.col(j).norm();
    } else {
      sigma(j) = 0.0;
      u.col(j) = detail::orthogonal_completion(u, j);
      v.col(j) = detail::orthogonal_completion(v, j);
    }
  }
  return DilationSvd{Subspace(u), std::move(sigma), Subspace(v)};
}

// Spectral norm through the largest dilation eigenvalue (eigenvalue-only
// solve; symmetric inputs skip the dilation since their dilation spectrum
// is the set of +-|lambda_i|).
inline double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == a.cols() && a == a.transpose()) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric_dilation(a).mat(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

inline NormBundle norms(const Matrix& a) {
  NormBundle b;
  b.spectral = spectral_norm(a);
  b.fro = a.norm();
  b.two_inf = two_inf_norm(a);
  b.inf_two = two_inf_norm(a.transpose());
  b.entry_inf = entry_inf_norm(a);
  return b;
}

}  // namespace specp
