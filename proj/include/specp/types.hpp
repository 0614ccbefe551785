#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace specp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

// Symmetric matrix with exact entrywise symmetry. Construction averages
// a(i,j) and a(j,i); IEEE addition is commutative, so the result is
// bitwise symmetric even for inputs that are only symmetric up to
// rounding.
class SymMatrix {
 public:
  SymMatrix() = default;

  explicit SymMatrix(const Matrix& a) {
    require(a.rows() == a.cols() && a.rows() >= 1, "SymMatrix: square matrix of dimension >= 1 required");
    require(a.allFinite(), "SymMatrix: non-finite entry");
    m_ = 0.5 * (a + a.transpose());
  }

  static SymMatrix zero(Eigen::Index n) {
    require(n >= 1, "SymMatrix: dimension >= 1 required");
    SymMatrix s;
    s.m_ = Matrix::Zero(n, n);
    return s;
  }

  // For generators that fill a bitwise-symmetric matrix directly.
  static SymMatrix from_symmetric_unchecked(Matrix a) {
    require(a.rows() == a.cols() && a.rows() >= 1, "SymMatrix: square matrix of dimension >= 1 required");
    SymMatrix s;
    s.m_ = std::move(a);
    return s;
  }

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& mat() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  SymMatrix operator-() const { return from_symmetric_unchecked(-m_); }

 private:
  Matrix m_;
};

// Orthonormal basis of an r-dimensional subspace of R^n.
class Subspace {
 public:
  Subspace() = default;

  explicit Subspace(const Matrix& basis) : b_(basis) {
    const auto n = b_.rows();
    const auto r = b_.cols();
    require(r >= 1 && r <= n, "Subspace: rank must satisfy 1 <= r <= n");
    const double dev = (b_.transpose() * b_ - Matrix::Identity(r, r)).norm();
    require(dev <= 1e-10 * std::sqrt(static_cast<double>(r)) + 1e-10,
            "Subspace: basis columns are not orthonormal");
  }

  Eigen::Index ambient_dim() const { return b_.rows(); }
  Eigen::Index rank() const { return b_.cols(); }
  const Matrix& basis() const { return b_; }

 private:
  Matrix b_;
};

// Eigenpairs of a symmetric matrix ordered by |lambda_1| >= ... >= |lambda_n|.
// Ties in magnitude are broken by signed value descending; each eigenvector
// has its largest-magnitude coordinate (lowest index on ties) made positive.
struct SpectralDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;
  Eigen::Index source_dim = 0;
};

struct NormBundle {
  double spectral = 0;
  double fro = 0;
  double two_inf = 0;  // max row l2 norm
  double inf_two = 0;  // max column l2 norm
  double entry_inf = 0;
};

// Subspace alignment summary for a pair (U, U*).
struct AlignmentReport {
  Matrix h;          // U^T U*
  Matrix sgn_h;      // orthonormal polar factor of h
  Vector angles;     // principal angles, nondecreasing in [0, pi/2]
  double dist_spectral = 0;  // ||U sgn(h) - U*||
  double dist_fro = 0;       // ||U sgn(h) - U*||_F
  double proj_spectral = 0;  // ||U U^T - U* U*^T||
  double proj_fro = 0;       // ||U U^T - U* U*^T||_F
  double h_minus_sgn = 0;    // ||h - sgn(h)||
  double h_inv_norm = 0;     // ||h^{-1}||, infinity when singular
  bool h_singular = false;
};

inline double two_inf_norm(const Matrix& a) { return std::sqrt(a.rowwise().squaredNorm().maxCoeff()); }
inline double entry_inf_norm(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace specp
