#pragma once

#include "specp/spectral.hpp"
#include "specp/types.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace specp {

// Principal angles between equal-rank subspaces: theta_i = arccos(sigma_i)
// for the singular values of U^T V, nondecreasing in [0, pi/2].
inline Vector principal_angles(const Subspace& u, const Subspace& v) {
  require(u.ambient_dim() == v.ambient_dim(), "principal_angles: ambient dimension mismatch");
  require(u.rank() == v.rank(), "principal_angles: rank mismatch");
  Eigen::JacobiSVD<Matrix> svd(u.basis().transpose() * v.basis());
  Vector angles(u.rank());
  for (Eigen::Index i = 0; i < u.rank(); ++i) {
    const double c = std::clamp(svd.singularValues()(i), 0.0, 1.0);
    angles(i) = std::acos(c);
  }
  return angles;  // singular values descend, so angles ascend
}

// Orthonormal polar factor U_Z V_Z^T; the rotation maximizing <R, Z>.
inline Matrix matrix_sign(const Matrix& z) {
  require(z.rows() == z.cols() && z.rows() >= 1, "matrix_sign: square input required");
  require(z.allFinite(), "matrix_sign: non-finite entry");
  Eigen::JacobiSVD<Matrix> svd(z, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(z.rows() - 1);
  if (!(smin > 1e-12 * smax) || smax == 0.0)
    throw std::domain_error("matrix_sign: sign undefined for rank-deficient input");
  return svd.matrixU() * svd.matrixV().transpose();
}

inline AlignmentReport align(const Subspace& u, const Subspace& ustar) {
  require(u.ambient_dim() == ustar.ambient_dim(), "align: ambient dimension mismatch");
  require(u.rank() == ustar.rank(), "align: rank mismatch");
  const Eigen::Index r = u.rank();

  AlignmentReport rep;
  rep.h = u.basis().transpose() * ustar.basis();

  Eigen::JacobiSVD<Matrix> hsvd(rep.h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  rep.sgn_h = hsvd.matrixU() * hsvd.matrixV().transpose();

  rep.angles.resize(r);
  for (Eigen::Index i = 0; i < r; ++i)
    rep.angles(i) = std::acos(std::clamp(hsvd.singularValues()(i), 0.0, 1.0));

  const double smax = hsvd.singularValues()(0);
  const double smin = hsvd.singularValues()(r - 1);
  rep.h_singular = !(smin > 1e-12 * std::max(smax, 1.0));
  rep.h_inv_norm = rep.h_singular ? std::numeric_limits<double>::infinity() : 1.0 / smin;

  const Matrix aligned_diff = u.basis() * rep.sgn_h - ustar.basis();
  rep.dist_spectral = Eigen::JacobiSVD<Matrix>(aligned_diff).singularValues()(0);
  rep.dist_fro = aligned_diff.norm();

  const Matrix proj_diff =
      u.basis() * u.basis().transpose() - ustar.basis() * ustar.basis().transpose();
  rep.proj_spectral = spectral_norm(proj_diff);
  rep.proj_fro = proj_diff.norm();

  rep.h_minus_sgn = Eigen::JacobiSVD<Matrix>(rep.h - rep.sgn_h).singularValues()(0);
  return rep;
}

}  // namespace specp
