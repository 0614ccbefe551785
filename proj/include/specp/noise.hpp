#pragma once

#include "specp/rng.hpp"
#include "specp/spectral.hpp"
#include "specp/types.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace specp {

enum class NoiseFamily { BoundedUniform, TruncatedGaussian, RademacherScaled, BernoulliCentered };

inline NoiseFamily noise_family_from_string(const std::string& s) {
  if (s == "bounded-uniform") return NoiseFamily::BoundedUniform;
  if (s == "truncated-gaussian") return NoiseFamily::TruncatedGaussian;
  if (s == "rademacher-scaled") return NoiseFamily::RademacherScaled;
  if (s == "bernoulli-centered") return NoiseFamily::BernoulliCentered;
  throw std::invalid_argument("unknown noise family: " + s);
}

// Symmetric noise with independent mean-zero entries on the lower triangle,
// per-entry standard deviation at most sigma and magnitude at most the
// family's bound.
struct NoiseModel {
  NoiseFamily family = NoiseFamily::BoundedUniform;
  double sigma = 0;
  std::uint64_t seed = 0;

  // Magnitude bound B. The truncated-gaussian bound is the truncation level
  // 5*sigma*sqrt(log n) and therefore depends on the dimension.
  double bound_for(Eigen::Index n) const {
    if (sigma == 0) return 0;
    switch (family) {
      case NoiseFamily::BoundedUniform:
        return std::sqrt(3.0) * sigma;
      case NoiseFamily::TruncatedGaussian:
        return 5.0 * sigma * std::sqrt(std::log(static_cast<double>(n)));
      case NoiseFamily::RademacherScaled:
        return sigma;
      case NoiseFamily::BernoulliCentered:
        return 1.0;
    }
    return 0;
  }
};

namespace detail {

inline double draw_noise_entry(const NoiseModel& model, CounterRng& gen, double bound) {
  switch (model.family) {
    case NoiseFamily::BoundedUniform:
      return bound * (2.0 * gen.next_unit() - 1.0);
    case NoiseFamily::TruncatedGaussian: {
      const double g = model.sigma * gen.next_gaussian();
      return std::abs(g) <= bound ? g : 0.0;
    }
    case NoiseFamily::RademacherScaled:
      return gen.next_unit() < 0.5 ? -model.sigma : model.sigma;
    case NoiseFamily::BernoulliCentered: {
      const double p = model.sigma * model.sigma;
      return (gen.next_unit() < p ? 1.0 : 0.0) - p;
    }
  }
  return 0;
}

}  // namespace detail

inline SymMatrix sample_symmetric_noise(const NoiseModel& model, Eigen::Index n) {
  require(n >= 1, "sample_symmetric_noise: n >= 1 required");
  require(model.sigma >= 0, "sample_symmetric_noise: sigma must be nonnegative");
  if (model.family == NoiseFamily::BernoulliCentered)
    require(model.sigma <= 1.0, "sample_symmetric_noise: bernoulli-centered requires sigma <= 1");
  Matrix e = Matrix::Zero(n, n);
  if (model.sigma == 0) return SymMatrix::from_symmetric_unchecked(std::move(e));
  const double bound = model.bound_for(n);
  CounterRng gen(rng::derive(model.seed, 0x6e6f697365ULL));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = detail::draw_noise_entry(model, gen, bound);
      e(i, j) = v;
      e(j, i) = v;
    }
  }
  return SymMatrix::from_symmetric_unchecked(std::move(e));
}

// ---------------------------------------------------------------------------
// Ground-truth construction
// ---------------------------------------------------------------------------

struct InstanceSpec {
  Eigen::Index n = 0;
  Eigen::Index r = 1;
  Vector lambdas;       // signed, |l1| >= ... >= |l_r| > 0
  double mu_target = 1;
  double kappa = 1;
  NoiseModel noise;
};

inline double measured_incoherence(const Matrix& basis) {
  const double row_max_sq = basis.rowwise().squaredNorm().maxCoeff();
  return static_cast<double>(basis.rows()) * row_max_sq / static_cast<double>(basis.cols());
}

namespace detail {

// Orthonormal n x r frame with exactly equal row norms (incoherence 1):
// the constant column plus cosine/sine pairs at distinct frequencies.
inline Matrix flat_frame(Eigen::Index n, Eigen::Index r) {
  Matrix f(n, r);
  const double tau = 6.283185307179586476925287;
  Eigen::Index col = 0;
  if (r % 2 == 1) {
    f.col(col++).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  }
  for (Eigen::Index freq = 1; col < r; ++freq) {
    require(freq <= (n - 1) / 2, "flat_frame: not enough frequencies; need larger n for this rank");
    for (Eigen::Index j = 0; j < n; ++j) {
      const double phase = tau * static_cast<double>(freq) * static_cast<double>(j) / static_cast<double>(n);
      f(j, col) = std::sqrt(2.0 / static_cast<double>(n)) * std::cos(phase);
      f(j, col + 1) = std::sqrt(2.0 / static_cast<double>(n)) * std::sin(phase);
    }
    col += 2;
  }
  // Tidy up rounding so the frame is orthonormal to working precision.
  Eigen::HouseholderQR<Matrix> qr(f);
  Matrix q = qr.householderQ() * Matrix::Identity(n, r);
  for (Eigen::Index k = 0; k < r; ++k)
    if (q.col(k).dot(f.col(k)) < 0) q.col(k) = -q.col(k);
  return q;
}

inline Matrix random_orthonormal(Eigen::Index n, Eigen::Index r, CounterRng& gen) {
  Matrix g(n, r);
  for (Eigen::Index j = 0; j < r; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = gen.next_gaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(n, r);
}

inline Matrix orthonormalize(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
}

// Blend between two frames with the mixing weight chosen so that the
// measured incoherence lands near the target. Exact control is
// over-constrained for r > 1; a coarse scan plus local bisection reliably
// lands well inside the documented 20% tolerance.
inline Matrix blend_to_incoherence(const Matrix& base, const Matrix& toward, double mu_target) {
  const auto mu_of = [&](double t) {
    return measured_incoherence(orthonormalize((1.0 - t) * base + t * toward));
  };
  double best_t = 0;
  double best_err = std::abs(mu_of(0) - mu_target);
  const int grid = 32;
  for (int k = 1; k <= grid; ++k) {
    const double t = static_cast<double>(k) / grid;
    const double err = std::abs(mu_of(t) - mu_target);
    if (err < best_err) {
      best_err = err;
      best_t = t;
    }
  }
  double lo = std::max(0.0, best_t - 1.0 / grid);
  double hi = std::min(1.0, best_t + 1.0 / grid);
  for (int it = 0; it < 50; ++it) {
    const double m1 = lo + (hi - lo) / 3;
    const double m2 = hi - (hi - lo) / 3;
    if (std::abs(mu_of(m1) - mu_target) < std::abs(mu_of(m2) - mu_target))
      hi = m2;
    else
      lo = m1;
  }
  const double t = (lo + hi) / 2;
  return detail::orthonormalize((1.0 - t) * base + t * toward);
}

}  // namespace detail

struct GroundTruth {
  SymMatrix mstar;
  Subspace ustar;
  Vector lambdastar;
};

inline GroundTruth make_ground_truth(const InstanceSpec& spec) {
  const Eigen::Index n = spec.n;
  const Eigen::Index r = spec.r;
  require(n >= 1 && r >= 1 && r <= n, "make_ground_truth: need 1 <= r <= n");
  require(spec.lambdas.size() == r, "make_ground_truth: lambdas must have r entries");
  for (Eigen::Index i = 0; i < r; ++i) require(spec.lambdas(i) != 0, "make_ground_truth: zero eigenvalue");
  for (Eigen::Index i = 1; i < r; ++i)
    require(std::abs(spec.lambdas(i - 1)) >= std::abs(spec.lambdas(i)),
            "make_ground_truth: lambdas not ordered by magnitude");
  const double max_mu = static_cast<double>(n) / static_cast<double>(r);
  require(spec.mu_target >= 1.0 && spec.mu_target <= max_mu, "make_ground_truth: mu_target outside [1, n/r]");
  const double kappa_actual = std::abs(spec.lambdas(0)) / std::abs(spec.lambdas(r - 1));
  require(std::abs(spec.kappa - kappa_actual) <= 1e-9 * kappa_actual,
          "make_ground_truth: kappa inconsistent with lambdas");

  CounterRng gen(rng::derive(spec.noise.seed, 0x7472757468ULL));

  Matrix basis;
  if (r == n) {
    basis = detail::random_orthonormal(n, r, gen);  // square: every row norm is 1, mu == 1
  } else if (spec.mu_target <= 1.0 + 1e-9) {
    basis = detail::flat_frame(n, r);
  } else if (spec.mu_target >= max_mu * (1.0 - 1e-9)) {
    basis = Matrix::Identity(n, n).leftCols(r);
  } else {
    const Matrix q = detail::random_orthonormal(n, r, gen);
    const double mu_q = measured_incoherence(q);
    if (spec.mu_target <= mu_q) {
      basis = detail::blend_to_incoherence(detail::flat_frame(n, r), q, spec.mu_target);
    } else {
      basis = detail::blend_to_incoherence(q, Matrix::Identity(n, n).leftCols(r), spec.mu_target);
    }
  }

  GroundTruth g;
  g.ustar = Subspace(basis);
  g.lambdastar = spec.lambdas;
  g.mstar = SymMatrix(basis * spec.lambdas.asDiagonal() * basis.transpose());
  return g;
}

// ---------------------------------------------------------------------------
// Assumption diagnostics
// ---------------------------------------------------------------------------

struct AssumptionReport {
  double sigma_hat = 0;     // RMS of the sampled entries
  double b_hat = 0;         // max |E_ij|
  double c_b = 0;           // B / (sigma * sqrt(n / (mu log n)))
  double c2_empirical = 0;  // ||E|| / (sigma sqrt(n))
  bool holds_cb = true;
};

inline AssumptionReport assumption_report(const SymMatrix& e, const NoiseModel& model, double mu,
                                          double cb_cap = 6.0) {
  const Eigen::Index n = e.dim();
  require(n >= 2, "assumption_report: n >= 2 required");
  require(mu >= 1.0, "assumption_report: mu >= 1 required");
  AssumptionReport rep;
  rep.sigma_hat = std::sqrt(e.mat().squaredNorm() / static_cast<double>(n * n));
  rep.b_hat = e.mat().cwiseAbs().maxCoeff();
  const double spec_norm = spectral_norm(e.mat());
  if (model.sigma > 0) {
    rep.c_b = model.bound_for(n) / (model.sigma * std::sqrt(static_cast<double>(n) / (mu * std::log(static_cast<double>(n)))));
    rep.c2_empirical = spec_norm / (model.sigma * std::sqrt(static_cast<double>(n)));
  } else {
    rep.c_b = 0;
    rep.c2_empirical = 0;
  }
  rep.holds_cb = rep.c_b <= cb_cap;
  return rep;
}

// ---------------------------------------------------------------------------
// Application instances: SBM and matrix completion
// ---------------------------------------------------------------------------

struct SbmInstance {
  Matrix adjacency;
  SymMatrix m;      // A - (p+q)/2 * 11^T + p I
  SymMatrix mstar;  // (p-q)/2 * x x^T
  Eigen::VectorXi labels;  // first n/2 entries +1
  double lambda_star = 0;  // (p - q) n / 2
};

inline SbmInstance sbm_instance(Eigen::Index n, double p, double q, std::uint64_t seed) {
  require(n >= 2 && n % 2 == 0, "sbm_instance: n must be even and >= 2");
  require(q >= 0 && p <= 1 && q < p, "sbm_instance: need 0 <= q < p <= 1");
  SbmInstance inst;
  inst.adjacency = Matrix::Zero(n, n);
  CounterRng gen(rng::derive(seed, 0x73626dULL));
  const Eigen::Index half = n / 2;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const bool same = (i < half) == (j < half);
      const double prob = same ? p : q;
      const double edge = gen.next_unit() < prob ? 1.0 : 0.0;
      inst.adjacency(i, j) = edge;
      inst.adjacency(j, i) = edge;
    }
  }
  Matrix m = inst.adjacency;
  m.array() -= (p + q) / 2;
  m.diagonal().array() += p;  // cancels the -(p+q)/2 shift and recentres the zero diagonal
  inst.m = SymMatrix::from_symmetric_unchecked(std::move(m));

  Vector x(n);
  x.head(half).setOnes();
  x.tail(n - half).setConstant(-1.0);
  inst.mstar = SymMatrix::from_symmetric_unchecked(((p - q) / 2) * (x * x.transpose()));
  inst.labels = x.cast<int>();
  inst.lambda_star = (p - q) * static_cast<double>(n) / 2;
  return inst;
}

struct CompletionInstance {
  Eigen::MatrixXi omega;  // 1 = observed
  Matrix m;               // inverse-probability-weighted observations
};

inline CompletionInstance completion_instance(const Matrix& mstar, double p, std::uint64_t seed) {
  require(p > 0 && p <= 1, "completion_instance: p must lie in (0, 1]");
  CompletionInstance inst;
  inst.omega.setZero(mstar.rows(), mstar.cols());
  inst.m = Matrix::Zero(mstar.rows(), mstar.cols());
  CounterRng gen(rng::derive(seed, 0x6f6d656761ULL));
  for (Eigen::Index i = 0; i < mstar.rows(); ++i) {
    for (Eigen::Index j = 0; j < mstar.cols(); ++j) {
      if (gen.next_unit() < p) {
        inst.omega(i, j) = 1;
        inst.m(i, j) = mstar(i, j) / p;
      }
    }
  }
  return inst;
}

struct HellingerThreshold {
  double h2 = 0;         // (sqrt(p) - sqrt(q))^2
  double threshold = 0;  // 2 log n / n
  double ratio = 0;      // h2 * n / (2 log n); above 1 means above the recovery threshold
};

inline HellingerThreshold hellinger_threshold(double p, double q, Eigen::Index n) {
  require(q >= 0 && q <= p && p <= 1, "hellinger_threshold: need 0 <= q <= p <= 1");
  require(n >= 2, "hellinger_threshold: n >= 2 required");
  HellingerThreshold h;
  const double d = std::sqrt(p) - std::sqrt(q);
  h.h2 = d * d;
  h.threshold = 2.0 * std::log(static_cast<double>(n)) / static_cast<double>(n);
  h.ratio = h.h2 / h.threshold;
  return h;
}

}  // namespace specp
