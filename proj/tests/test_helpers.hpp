#pragma once

#include "specp/specp.hpp"

#include <vector>

namespace testutil {

inline std::vector<std::vector<double>> to_rows(const specp::Matrix& a) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(a.rows()),
                                       std::vector<double>(static_cast<std::size_t>(a.cols())));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a(i, j);
  return out;
}

inline specp::SymMatrix random_symmetric(Eigen::Index n, std::uint64_t seed, double scale = 1.0) {
  specp::CounterRng gen(specp::rng::derive(seed, 0x746573ULL));
  specp::Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = scale * (2.0 * gen.next_unit() - 1.0);
      a(i, j) = v;
      a(j, i) = v;
    }
  return specp::SymMatrix::from_symmetric_unchecked(std::move(a));
}

inline specp::Matrix random_dense(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed,
                                  double scale = 1.0) {
  specp::CounterRng gen(specp::rng::derive(seed, 0x64656e7365ULL));
  specp::Matrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = scale * (2.0 * gen.next_unit() - 1.0);
  return a;
}

inline specp::Subspace random_subspace(Eigen::Index n, Eigen::Index r, std::uint64_t seed) {
  specp::CounterRng gen(specp::rng::derive(seed, 0x737562ULL));
  specp::Matrix g(n, r);
  for (Eigen::Index j = 0; j < r; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = gen.next_gaussian();
  Eigen::HouseholderQR<specp::Matrix> qr(g);
  return specp::Subspace(qr.householderQ() * specp::Matrix::Identity(n, r));
}

inline specp::Matrix random_rotation(Eigen::Index r, std::uint64_t seed) {
  specp::CounterRng gen(specp::rng::derive(seed, 0x726f74ULL));
  specp::Matrix g(r, r);
  for (Eigen::Index j = 0; j < r; ++j)
    for (Eigen::Index i = 0; i < r; ++i) g(i, j) = gen.next_gaussian();
  Eigen::HouseholderQR<specp::Matrix> qr(g);
  specp::Matrix q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

}  // namespace testutil
