#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "test_helpers.hpp"

#include "specp/specp.hpp"

using namespace specp;
using Catch::Approx;

TEST_CASE("eig_by_magnitude on the analytic 2x2") {
  Matrix a(2, 2);
  a << 2, 1, 1, 2;
  const SpectralDecomposition d = eig_by_magnitude(SymMatrix(a));
  REQUIRE(d.eigenvalues(0) == Approx(3.0).margin(1e-12));
  REQUIRE(d.eigenvalues(1) == Approx(1.0).margin(1e-12));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  REQUIRE(d.eigenvectors(0, 0) == Approx(inv_sqrt2).margin(1e-12));
  REQUIRE(d.eigenvectors(1, 0) == Approx(inv_sqrt2).margin(1e-12));
  REQUIRE(std::abs(d.eigenvectors(0, 1)) == Approx(inv_sqrt2).margin(1e-12));
  REQUIRE(std::abs(d.eigenvectors(1, 1)) == Approx(inv_sqrt2).margin(1e-12));
  // Sign convention: the largest-magnitude coordinate of each vector is positive.
  REQUIRE(d.eigenvectors.col(1).cwiseAbs().maxCoeff() ==
          Approx(d.eigenvectors.col(1).maxCoeff()).margin(1e-12));
}

TEST_CASE("eig_by_magnitude orders a diagonal matrix by magnitude") {
  Matrix a = Matrix::Zero(3, 3);
  a.diagonal() << 1, -3, 2;
  const SpectralDecomposition d = eig_by_magnitude(SymMatrix(a));
  REQUIRE(d.eigenvalues(0) == Approx(-3.0));
  REQUIRE(d.eigenvalues(1) == Approx(2.0));
  REQUIRE(d.eigenvalues(2) == Approx(1.0));
}

TEST_CASE("eig_by_magnitude rejects non-finite input") {
  Matrix a(2, 2);
  a << 1, 0, 0, std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(SymMatrix(a), std::invalid_argument);
}

TEST_CASE("eig_by_magnitude matches the cyclic Jacobi oracle") {
  const SymMatrix s = testutil::random_symmetric(5, 7);
  const SpectralDecomposition d = eig_by_magnitude(s);
  const oracle::EigResult ref = oracle::jacobi_eig(testutil::to_rows(s.mat()));
  for (int k = 0; k < 5; ++k) {
    REQUIRE(d.eigenvalues(k) == Approx(ref.values[static_cast<std::size_t>(k)]).margin(1e-9));
    for (int i = 0; i < 5; ++i)
      REQUIRE(d.eigenvectors(i, k) ==
              Approx(ref.vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]).margin(1e-9));
  }
}

TEST_CASE("spectral decomposition invariants on random input") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const Eigen::Index n = 6 + static_cast<Eigen::Index>(seed);
    const SymMatrix s = testutil::random_symmetric(n, seed);
    const SpectralDecomposition d = eig_by_magnitude(s);
    Matrix recon = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
      recon += d.eigenvalues(k) * d.eigenvectors.col(k) * d.eigenvectors.col(k).transpose();
    REQUIRE((recon - s.mat()).norm() <= 1e-10 * std::max(1.0, s.mat().norm()));
    REQUIRE((d.eigenvectors.transpose() * d.eigenvectors - Matrix::Identity(n, n)).norm() <= 1e-12 * n);
    for (Eigen::Index k = 1; k < n; ++k)
      REQUIRE(std::abs(d.eigenvalues(k - 1)) >= std::abs(d.eigenvalues(k)) - 1e-14);
  }
}

TEST_CASE("eig_by_magnitude is deterministic") {
  const SymMatrix s = testutil::random_symmetric(8, 99);
  const SpectralDecomposition d1 = eig_by_magnitude(s);
  const SpectralDecomposition d2 = eig_by_magnitude(s);
  REQUIRE(d1.eigenvalues == d2.eigenvalues);
  REQUIRE(d1.eigenvectors == d2.eigenvectors);
}

TEST_CASE("svd_by_dilation on diagonal input") {
  Matrix a = Matrix::Zero(2, 2);
  a.diagonal() << 2, 1;
  const DilationSvd svd = svd_by_dilation(a, 2);
  REQUIRE(svd.sigma(0) == Approx(2.0).margin(1e-12));
  REQUIRE(svd.sigma(1) == Approx(1.0).margin(1e-12));

  const SpectralDecomposition d = eig_by_magnitude(symmetric_dilation(a));
  REQUIRE(d.eigenvalues(0) == Approx(2.0).margin(1e-12));
  REQUIRE(d.eigenvalues(1) == Approx(-2.0).margin(1e-12));
  REQUIRE(d.eigenvalues(2) == Approx(1.0).margin(1e-12));
  REQUIRE(d.eigenvalues(3) == Approx(-1.0).margin(1e-12));
}

TEST_CASE("svd_by_dilation of a scalar gives the plus-minus pair") {
  Matrix a(1, 1);
  a << 3;
  const SpectralDecomposition d = eig_by_magnitude(symmetric_dilation(a));
  REQUIRE(d.eigenvalues(0) == Approx(3.0).margin(1e-12));
  REQUIRE(d.eigenvalues(1) == Approx(-3.0).margin(1e-12));
}

TEST_CASE("svd_by_dilation singular values match the A A^T oracle") {
  const Matrix a = testutil::random_dense(2, 3, 11);
  const DilationSvd svd = svd_by_dilation(a, 2);
  const Matrix aat = a * a.transpose();
  const oracle::EigResult ref = oracle::jacobi_eig(testutil::to_rows(aat));
  REQUIRE(svd.sigma(0) * svd.sigma(0) == Approx(ref.values[0]).margin(1e-9));
  REQUIRE(svd.sigma(1) * svd.sigma(1) == Approx(ref.values[1]).margin(1e-9));
}

TEST_CASE("svd_by_dilation residual equals the next singular value") {
  const Matrix a = testutil::random_dense(6, 5, 21);
  for (Eigen::Index r : {1, 2, 3}) {
    const DilationSvd svd = svd_by_dilation(a, r);
    const Matrix approx_mat = svd.u.basis() * svd.sigma.asDiagonal() * svd.v.basis().transpose();
    const DilationSvd full = svd_by_dilation(a, std::min<Eigen::Index>(a.rows(), a.cols()));
    REQUIRE(spectral_norm(a - approx_mat) == Approx(full.sigma(r)).margin(1e-9));
  }
}

TEST_CASE("svd_by_dilation rejects out-of-range rank") {
  const Matrix a = testutil::random_dense(3, 4, 2);
  REQUIRE_THROWS_AS(svd_by_dilation(a, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(svd_by_dilation(a, 4), std::invalid_argument);
}

TEST_CASE("dilation spectrum is symmetric") {
  for (std::uint64_t seed : {5ULL, 6ULL, 7ULL, 8ULL}) {
    const Matrix a = testutil::random_dense(4, 3, seed);
    const SpectralDecomposition d = eig_by_magnitude(symmetric_dilation(a));
    for (Eigen::Index k = 0; k < 6; ++k) {
      const double lam = d.eigenvalues(k);
      if (std::abs(lam) <= 1e-12) continue;
      bool matched = false;
      for (Eigen::Index j = 0; j < 7; ++j)
        if (std::abs(d.eigenvalues(j) + lam) <= 1e-9) matched = true;
      REQUIRE(matched);
    }
  }
}

TEST_CASE("principal angles: coincident and planar cases") {
  const Subspace u = testutil::random_subspace(5, 2, 31);
  const Vector zero_angles = principal_angles(u, u);
  REQUIRE(zero_angles.cwiseAbs().maxCoeff() <= 1e-7);  // acos near 1 loses half precision

  Matrix e1(2, 1), rot(2, 1);
  e1 << 1, 0;
  const double deg30 = 30.0 * 3.14159265358979323846 / 180.0;
  rot << std::cos(deg30), std::sin(deg30);
  const Vector ang = principal_angles(Subspace(e1), Subspace(rot));
  REQUIRE(ang(0) == Approx(deg30).margin(1e-12));
}

TEST_CASE("principal angles against the projector oracle") {
  const Subspace u = testutil::random_subspace(6, 2, 41);
  const Subspace v = testutil::random_subspace(6, 2, 42);
  const Vector ang = principal_angles(u, v);

  // sin^2(theta_i) are the eigenvalues of U^T (I - V V^T) U.
  const Matrix proj = u.basis().transpose() *
                      (Matrix::Identity(6, 6) - v.basis() * v.basis().transpose()) * u.basis();
  const oracle::EigResult ref = oracle::jacobi_eig(testutil::to_rows(proj));
  std::vector<double> sin_sq{std::sin(ang(0)) * std::sin(ang(0)), std::sin(ang(1)) * std::sin(ang(1))};
  std::sort(sin_sq.begin(), sin_sq.end(), std::greater<>());
  REQUIRE(sin_sq[0] == Approx(ref.values[0]).margin(1e-9));
  REQUIRE(sin_sq[1] == Approx(ref.values[1]).margin(1e-9));
}

TEST_CASE("principal angles reject rank mismatch") {
  REQUIRE_THROWS_AS(principal_angles(testutil::random_subspace(5, 2, 1), testutil::random_subspace(5, 3, 2)),
                    std::invalid_argument);
}

TEST_CASE("align reproduces the warm-up numbers") {
  Matrix e1(2, 1), diagv(2, 1);
  e1 << 1, 0;
  diagv << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const AlignmentReport rep = align(Subspace(e1), Subspace(diagv));
  REQUIRE(rep.proj_spectral == Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
  REQUIRE(rep.proj_fro == Approx(1.0).margin(1e-12));
  REQUIRE(rep.dist_spectral == Approx(std::sqrt(2.0 - std::sqrt(2.0))).margin(1e-12));
}

TEST_CASE("rank-1 rotation-optimal distance by brute force over signs") {
  const Subspace u = testutil::random_subspace(7, 1, 51);
  const Subspace v = testutil::random_subspace(7, 1, 52);
  const AlignmentReport rep = align(u, v);
  const double plus = (u.basis() - v.basis()).norm();
  const double minus = (-u.basis() - v.basis()).norm();
  REQUIRE(rep.dist_fro == Approx(std::min(plus, minus)).margin(1e-12));
}

TEST_CASE("align of identical subspaces is exactly aligned") {
  const Subspace u = testutil::random_subspace(6, 3, 61);
  const AlignmentReport rep = align(u, u);
  REQUIRE(rep.dist_spectral <= 1e-12);
  REQUIRE(rep.dist_fro <= 1e-12);
  REQUIRE(rep.proj_spectral <= 1e-12);
  REQUIRE((rep.h - Matrix::Identity(3, 3)).norm() <= 1e-12);
  REQUIRE((rep.sgn_h - Matrix::Identity(3, 3)).norm() <= 1e-12);
}

TEST_CASE("alignment report invariants on random subspace pairs") {
  int cases = 0;
  for (Eigen::Index r = 1; r <= 3; ++r) {
    for (Eigen::Index n = 4; n <= 10; ++n) {
      if (r > n) continue;
      const Subspace u = testutil::random_subspace(n, r, 100 + static_cast<std::uint64_t>(10 * n + r));
      const Subspace v = testutil::random_subspace(n, r, 200 + static_cast<std::uint64_t>(10 * n + r));
      const AlignmentReport rep = align(u, v);
      ++cases;

      double sin_max = 0, sin_fro_sq = 0;
      for (Eigen::Index i = 0; i < r; ++i) {
        sin_max = std::max(sin_max, std::sin(rep.angles(i)));
        sin_fro_sq += std::sin(rep.angles(i)) * std::sin(rep.angles(i));
      }
      REQUIRE(rep.proj_spectral == Approx(sin_max).margin(1e-10));
      REQUIRE(rep.proj_fro == Approx(std::sqrt(2.0 * sin_fro_sq)).margin(1e-10));

      REQUIRE(rep.proj_spectral <= rep.dist_spectral + 1e-10);
      REQUIRE(rep.dist_spectral <= std::sqrt(2.0) * rep.proj_spectral + 1e-10);
      REQUIRE(rep.proj_fro / std::sqrt(2.0) - 1e-10 <= rep.dist_fro);
      REQUIRE(rep.dist_fro <= rep.proj_fro + 1e-10);

      REQUIRE((rep.sgn_h.transpose() * rep.sgn_h - Matrix::Identity(r, r)).norm() <= 1e-12 * r);
    }
  }
  REQUIRE(cases >= 20);
}

TEST_CASE("dist is invariant under right rotation of the input basis") {
  for (std::uint64_t seed : {71ULL, 72ULL, 73ULL}) {
    const Subspace u = testutil::random_subspace(8, 3, seed);
    const Subspace v = testutil::random_subspace(8, 3, seed + 100);
    const Matrix rot = testutil::random_rotation(3, seed + 200);
    const AlignmentReport a = align(u, v);
    const AlignmentReport b = align(Subspace(u.basis() * rot), v);
    REQUIRE(std::abs(a.dist_spectral - b.dist_spectral) <= 1e-10);
    REQUIRE(std::abs(a.dist_fro - b.dist_fro) <= 1e-10);
  }
}

TEST_CASE("matrix_sign basics") {
  Matrix z = Matrix::Zero(2, 2);
  z.diagonal() << 0.3, -0.2;
  const Matrix s = matrix_sign(z);
  REQUIRE(s(0, 0) == Approx(1.0).margin(1e-12));
  REQUIRE(s(1, 1) == Approx(-1.0).margin(1e-12));
  REQUIRE(std::abs(s(0, 1)) <= 1e-12);

  const Matrix rot = testutil::random_rotation(3, 5);
  REQUIRE((matrix_sign(rot) - rot).norm() <= 1e-12);
}

TEST_CASE("matrix_sign equals the polar factor from the Jacobi-oracle SVD") {
  const Matrix z = testutil::random_dense(3, 3, 5);
  const Matrix s = matrix_sign(z);

  // Oracle route: eigenvectors of Z^T Z give V and the singular values; then
  // U = Z V Sigma^{-1} and sgn(Z) = U V^T.
  const Matrix ztz = z.transpose() * z;
  const oracle::EigResult ref = oracle::jacobi_eig(testutil::to_rows(ztz));
  Matrix v(3, 3);
  Vector sig(3);
  for (int k = 0; k < 3; ++k) {
    sig(k) = std::sqrt(std::max(ref.values[static_cast<std::size_t>(k)], 0.0));
    for (int i = 0; i < 3; ++i) v(i, k) = ref.vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
  }
  const Matrix u = z * v * sig.cwiseInverse().asDiagonal();
  REQUIRE((s - u * v.transpose()).norm() <= 1e-10);
}

TEST_CASE("matrix_sign commutes with left rotation") {
  for (std::uint64_t seed : {81ULL, 82ULL}) {
    const Matrix z = testutil::random_dense(3, 3, seed);
    const Matrix rot = testutil::random_rotation(3, seed + 10);
    REQUIRE((matrix_sign(rot * z) - rot * matrix_sign(z)).norm() <= 1e-10);
  }
}

TEST_CASE("matrix_sign rejects rank-deficient input") {
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0;
  REQUIRE_THROWS_AS(matrix_sign(z), std::domain_error);
}

TEST_CASE("norms on simple matrices") {
  const NormBundle id3 = norms(Matrix::Identity(3, 3));
  REQUIRE(id3.spectral == Approx(1.0).margin(1e-12));
  REQUIRE(id3.fro == Approx(std::sqrt(3.0)).margin(1e-12));
  REQUIRE(id3.two_inf == Approx(1.0).margin(1e-12));
  REQUIRE(id3.entry_inf == Approx(1.0).margin(1e-12));

  Matrix row(1, 2);
  row << 3, 4;
  const NormBundle b = norms(row);
  REQUIRE(b.spectral == Approx(5.0).margin(1e-12));
  REQUIRE(b.two_inf == Approx(5.0).margin(1e-12));
  REQUIRE(b.entry_inf == Approx(4.0).margin(1e-12));
  REQUIRE(b.inf_two == Approx(4.0).margin(1e-12));
}

TEST_CASE("spectral norm matches the power-iteration oracle") {
  const Matrix a = testutil::random_dense(4, 4, 3);
  REQUIRE(norms(a).spectral == Approx(oracle::power_spectral_norm(testutil::to_rows(a))).margin(1e-8));
}

TEST_CASE("Weyl inequality holds on random pairs") {
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 4 + trial % 5;
    const SymMatrix s = testutil::random_symmetric(n, 300 + static_cast<std::uint64_t>(trial));
    const SymMatrix e = testutil::random_symmetric(n, 700 + static_cast<std::uint64_t>(trial), 0.3);
    const SymMatrix sum = SymMatrix::from_symmetric_unchecked(s.mat() + e.mat());
    const double e_norm = spectral_norm(e.mat());

    Vector ls = eig_by_magnitude(s).eigenvalues;
    Vector lsum = eig_by_magnitude(sum).eigenvalues;
    std::sort(ls.data(), ls.data() + n, std::greater<>());
    std::sort(lsum.data(), lsum.data() + n, std::greater<>());
    for (Eigen::Index i = 0; i < n; ++i) REQUIRE(std::abs(ls(i) - lsum(i)) <= e_norm + 1e-12);
  }
}

TEST_CASE("subspace accepts r equal to n and rejects r of zero") {
  const Matrix q = testutil::random_rotation(4, 9);
  REQUIRE_NOTHROW(Subspace(q));
  REQUIRE_THROWS_AS(Subspace(Matrix(4, 0)), std::invalid_argument);
}
