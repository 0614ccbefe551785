#pragma once

#include "specp/certificates.hpp"
#include "specp/estimators.hpp"
#include "specp/instance.hpp"
#include "specp/loo.hpp"
#include "specp/serialize.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <vector>

namespace specp {

struct SweepConfig {
  std::string experiment;
  std::vector<Eigen::Index> n_grid{100, 800};
  Eigen::Index r = 2;
  std::vector<double> sigma_ratio_grid{0.01};  // sigma sqrt(n) / lambda_r*
  double kappa = 1.0;
  double mu = 1.0;
  std::vector<double> a_grid{8.0};  // SBM densities, units of log n / n
  std::vector<double> b_grid{0.5};
  double p = 0.5;  // observation probability for completion
  int trials = 30;
  std::uint64_t master_seed = 0;
  std::string out_dir = "out";
  std::string format = "csv";
  int jobs = 1;
  NoiseFamily family = NoiseFamily::BoundedUniform;
  Constants constants;

  void validate() const {
    require(trials >= 1, "config: trials >= 1 required");
    require(!n_grid.empty(), "config: n grid must be nonempty");
    require(!sigma_ratio_grid.empty(), "config: sigma-ratio grid must be nonempty");
    require(r >= 1, "config: r >= 1 required");
    require(kappa >= 1.0, "config: kappa >= 1 required");
    require(mu >= 1.0, "config: mu >= 1 required");
    require(jobs >= 1, "config: jobs >= 1 required");
    require(format == "csv" || format == "json", "config: format must be csv or json");
  }

  // Canonical key=value rendering; also the digest input.
  std::string canonical() const;
  std::string digest() const { return fnv1a_hex(canonical()); }
};

struct FitResult {
  std::string name;
  double slope = 0;
  double r2 = 0;
};

struct Assertion {
  std::string name;
  double value = 0;
  double bound = 0;
  bool pass = true;
};

struct SweepOutput {
  std::string experiment;
  std::vector<std::string> columns;          // canonical artifact header
  std::vector<std::vector<std::string>> rows;
  std::string extra_name;                    // optional secondary artifact
  std::string extra_content;
  std::vector<FitResult> fits;
  std::vector<Assertion> assertions;
  std::vector<std::pair<double, double>> plot_points;  // grid means for the svg

  std::string csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out += ",";
      out += columns[i];
    }
    out += "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ",";
        out += row[i];
      }
      out += "\n";
    }
    return out;
  }

  std::string records_json() const {
    std::string out = "[";
    for (std::size_t k = 0; k < rows.size(); ++k) {
      out += k ? ",\n " : "\n ";
      out += "{";
      for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out += ", ";
        out += "\"" + columns[i] + "\": \"" + rows[k][i] + "\"";
      }
      out += "}";
    }
    out += "\n]\n";
    return out;
  }

  std::string summary_json(const std::string& digest) const {
    std::string out = "{\"experiment\": \"" + json_escape(experiment) + "\"";
    out += ", \"config_digest\": \"" + digest + "\"";
    out += ", \"fits\": [";
    for (std::size_t i = 0; i < fits.size(); ++i) {
      if (i) out += ", ";
      out += "{\"name\": \"" + json_escape(fits[i].name) + "\", \"slope\": " + json_number(fits[i].slope) +
             ", \"r2\": " + json_number(fits[i].r2) + "}";
    }
    out += "], \"assertions\": [";
    for (std::size_t i = 0; i < assertions.size(); ++i) {
      if (i) out += ", ";
      out += "{\"name\": \"" + json_escape(assertions[i].name) + "\", \"value\": " + json_number(assertions[i].value) +
             ", \"bound\": " + json_number(assertions[i].bound) + ", \"pass\": " + (assertions[i].pass ? "true" : "false") + "}";
    }
    out += "]}\n";
    return out;
  }

  bool all_pass() const {
    for (const auto& a : assertions)
      if (!a.pass) return false;
    return true;
  }
};

inline std::string SweepConfig::canonical() const {
  std::string s = "experiment=" + experiment + "\n";
  s += "n=";
  for (std::size_t i = 0; i < n_grid.size(); ++i) s += (i ? "," : "") + std::to_string(n_grid[i]);
  s += "\nr=" + std::to_string(r) + "\nsigmaratio=";
  for (std::size_t i = 0; i < sigma_ratio_grid.size(); ++i) s += (i ? "," : "") + fmt_double(sigma_ratio_grid[i]);
  s += "\nkappa=" + fmt_double(kappa) + "\nmu=" + fmt_double(mu) + "\na=";
  for (std::size_t i = 0; i < a_grid.size(); ++i) s += (i ? "," : "") + fmt_double(a_grid[i]);
  s += "\nb=";
  for (std::size_t i = 0; i < b_grid.size(); ++i) s += (i ? "," : "") + fmt_double(b_grid[i]);
  s += "\np=" + fmt_double(p) + "\ntrials=" + std::to_string(trials);
  s += "\nseed=" + std::to_string(master_seed) + "\nformat=" + format;
  s += "\nc2=" + fmt_double(constants.c2) + "\nc4=" + fmt_double(constants.c4);
  s += "\ncsigma=" + fmt_double(constants.c_sigma) + "\nthmc1=" + fmt_double(constants.thm_c1);
  s += "\nthmc2=" + fmt_double(constants.thm_c2) + "\nallowance=" + fmt_double(constants.violation_allowance);
  s += "\n";
  return s;
}

namespace detail {

// Results land in pre-sized slots keyed by trial index, so summaries do not
// depend on execution order.
template <typename Fn>
void run_indexed(int count, int jobs, Fn&& fn) {
  if (jobs <= 1) {
    for (int t = 0; t < count; ++t) fn(t);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(jobs, count);
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int t = next.fetch_add(1); t < count; t = next.fetch_add(1)) fn(t);
    });
  }
  for (auto& th : pool) th.join();
}

inline Vector lambda_profile(Eigen::Index r, double kappa) {
  Vector lam(r);
  if (r == 1) {
    lam(0) = 1.0;  // kappa is 1 by definition in the rank-1 case
  } else {
    for (Eigen::Index i = 0; i < r; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(r - 1);
      lam(i) = kappa + (1.0 - kappa) * t;  // linear from kappa down to 1
    }
  }
  return lam;
}

inline Instance trial_instance(Eigen::Index n, Eigen::Index r, double mu_target, double kappa,
                               double sigma_ratio, NoiseFamily family, std::uint64_t seed) {
  InstanceSpec spec;
  spec.n = n;
  spec.r = r;
  spec.lambdas = lambda_profile(r, kappa);
  spec.mu_target = mu_target;
  spec.kappa = r == 1 ? 1.0 : kappa;
  spec.noise.family = family;
  spec.noise.sigma = sigma_ratio / std::sqrt(static_cast<double>(n));  // lambda_r* = 1
  spec.noise.seed = seed;
  return make_instance(spec);
}

struct OlsFit {
  double slope = 0;
  double r2 = 0;
  int used = 0;
};

// Ordinary least squares on (log x, log y); nonpositive or non-finite points
// are excluded.
inline OlsFit log_log_fit(const std::vector<std::pair<double, double>>& pts) {
  std::vector<std::pair<double, double>> lp;
  for (const auto& [x, y] : pts)
    if (x > 0 && y > 0 && std::isfinite(x) && std::isfinite(y)) lp.emplace_back(std::log(x), std::log(y));
  OlsFit fit;
  fit.used = static_cast<int>(lp.size());
  if (lp.size() < 2) return fit;
  double mx = 0, my = 0;
  for (const auto& [x, y] : lp) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(lp.size());
  my /= static_cast<double>(lp.size());
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : lp) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0) return fit;
  fit.slope = sxy / sxx;
  fit.r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

inline double mean_finite(const std::vector<double>& xs, int* degenerate = nullptr) {
  double sum = 0;
  int used = 0, bad = 0;
  for (double x : xs) {
    if (std::isfinite(x)) {
      sum += x;
      ++used;
    } else {
      ++bad;
    }
  }
  if (degenerate) *degenerate = bad;
  return used > 0 ? sum / used : std::numeric_limits<double>::quiet_NaN();
}

constexpr double kDegenerateFloor = 1e-13;

}  // namespace detail

// ---------------------------------------------------------------------------
// scaling: de-localization of the row-wise error relative to the Frobenius
// error as n grows
// ---------------------------------------------------------------------------

inline SweepOutput scaling_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepOutput out;
  out.experiment = "scaling";
  out.columns = {"experiment", "n",     "r",    "mu_target", "mu_achieved", "kappa",
                 "sigma_ratio", "trial", "seed", "dist_fro",  "two_inf",     "ratio"};

  struct Row {
    double mu_achieved = 0, dist_fro = 0, two_inf = 0, ratio = 0;
    std::uint64_t seed = 0;
  };

  std::vector<double> mean_ratio_per_n;
  int total_degenerate = 0;
  for (std::size_t gi = 0; gi < cfg.n_grid.size(); ++gi) {
    const Eigen::Index n = cfg.n_grid[gi];
    const double sigma_ratio = cfg.sigma_ratio_grid[0];
    std::vector<Row> rows(static_cast<std::size_t>(cfg.trials));
    detail::run_indexed(cfg.trials, cfg.jobs, [&](int t) {
      const std::uint64_t seed = rng::derive(rng::derive(cfg.master_seed, gi), static_cast<std::uint64_t>(t));
      const Instance inst = detail::trial_instance(n, cfg.r, cfg.mu, cfg.kappa, sigma_ratio, cfg.family, seed);
      const Estimate est = compute_estimate(inst);
      const Matrix diff = est.u * est.sgn_h - inst.ustar.basis();
      Row& row = rows[static_cast<std::size_t>(t)];
      row.seed = seed;
      row.mu_achieved = inst.mu;
      row.dist_fro = diff.norm();
      row.two_inf = two_inf_norm(diff);
      row.ratio = row.dist_fro > detail::kDegenerateFloor
                      ? row.two_inf / row.dist_fro
                      : std::numeric_limits<double>::quiet_NaN();
    });
    std::vector<double> ratios;
    for (int t = 0; t < cfg.trials; ++t) {
      const Row& row = rows[static_cast<std::size_t>(t)];
      out.rows.push_back({"scaling", std::to_string(n), std::to_string(cfg.r), fmt_double(cfg.mu),
                          fmt_double(row.mu_achieved), fmt_double(cfg.kappa), fmt_double(sigma_ratio),
                          std::to_string(t), std::to_string(row.seed), fmt_double(row.dist_fro),
                          fmt_double(row.two_inf), fmt_double(row.ratio)});
      ratios.push_back(row.ratio);
    }
    int degenerate = 0;
    mean_ratio_per_n.push_back(detail::mean_finite(ratios, &degenerate));
    total_degenerate += degenerate;
  }

  std::vector<std::pair<double, double>> pts;
  for (std::size_t gi = 0; gi < cfg.n_grid.size(); ++gi)
    pts.emplace_back(static_cast<double>(cfg.n_grid[gi]), mean_ratio_per_n[gi]);
  out.plot_points = pts;
  const detail::OlsFit fit = detail::log_log_fit(pts);
  out.fits.push_back({"ratio_vs_n", fit.slope, fit.r2});

  if (cfg.n_grid.size() >= 2) {
    const double first = mean_ratio_per_n.front();
    const double last = mean_ratio_per_n.back();
    Assertion a;
    a.name = "delocalization-ratio-cap";
    a.value = last / first;
    a.bound = 0.5;
    a.pass = std::isfinite(a.value) && a.value <= a.bound;
    out.assertions.push_back(a);
  }
  out.assertions.push_back({"degenerate-count", static_cast<double>(total_degenerate),
                            static_cast<double>(cfg.trials * static_cast<int>(cfg.n_grid.size())), true});
  return out;
}

// ---------------------------------------------------------------------------
// first-order: the gap to the first-order target closes faster in sigma than
// the gap to the truth
// ---------------------------------------------------------------------------

inline SweepOutput first_order_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepOutput out;
  out.experiment = "first_order";
  out.columns = {"experiment", "n",     "r",    "mu_target", "mu_achieved", "kappa",
                 "sigma_ratio", "trial", "seed", "g_direct",  "g_first",     "ratio_fg"};

  struct Row {
    double mu_achieved = 0, g_direct = 0, g_first = 0, ratio = 0;
    std::uint64_t seed = 0;
  };

  const Eigen::Index n = cfg.n_grid[0];
  std::vector<double> mean_direct, mean_first, mean_ratio;
  for (std::size_t gi = 0; gi < cfg.sigma_ratio_grid.size(); ++gi) {
    const double sigma_ratio = cfg.sigma_ratio_grid[gi];
    std::vector<Row> rows(static_cast<std::size_t>(cfg.trials));
    detail::run_indexed(cfg.trials, cfg.jobs, [&](int t) {
      const std::uint64_t seed = rng::derive(rng::derive(cfg.master_seed, gi), static_cast<std::uint64_t>(t));
      const Instance inst = detail::trial_instance(n, cfg.r, cfg.mu, cfg.kappa, sigma_ratio, cfg.family, seed);
      const Estimate est = compute_estimate(inst);
      const Matrix usgnh = est.u * est.sgn_h;
      const Matrix target = first_order_target(inst.m, inst.ustar, inst.lambdastar);
      Row& row = rows[static_cast<std::size_t>(t)];
      row.seed = seed;
      row.mu_achieved = inst.mu;
      row.g_direct = two_inf_norm(usgnh - inst.ustar.basis());
      row.g_first = two_inf_norm(usgnh - target);
      row.ratio = row.g_direct > detail::kDegenerateFloor
                      ? row.g_first / row.g_direct
                      : std::numeric_limits<double>::quiet_NaN();
    });
    std::vector<double> gd, gf, rt;
    for (int t = 0; t < cfg.trials; ++t) {
      const Row& row = rows[static_cast<std::size_t>(t)];
      out.rows.push_back({"first_order", std::to_string(n), std::to_string(cfg.r), fmt_double(cfg.mu),
                          fmt_double(row.mu_achieved), fmt_double(cfg.kappa), fmt_double(sigma_ratio),
                          std::to_string(t), std::to_string(row.seed), fmt_double(row.g_direct),
                          fmt_double(row.g_first), fmt_double(row.ratio)});
      gd.push_back(row.g_direct);
      gf.push_back(row.g_first);
      rt.push_back(row.ratio);
    }
    mean_direct.push_back(detail::mean_finite(gd));
    mean_first.push_back(detail::mean_finite(gf));
    mean_ratio.push_back(detail::mean_finite(rt));
  }

  std::vector<std::pair<double, double>> pts_direct, pts_first;
  for (std::size_t gi = 0; gi < cfg.sigma_ratio_grid.size(); ++gi) {
    pts_direct.emplace_back(cfg.sigma_ratio_grid[gi], mean_direct[gi]);
    pts_first.emplace_back(cfg.sigma_ratio_grid[gi], mean_first[gi]);
  }
  out.plot_points = pts_direct;
  const detail::OlsFit fd = detail::log_log_fit(pts_direct);
  const detail::OlsFit ff = detail::log_log_fit(pts_first);
  out.fits.push_back({"g_direct_vs_sigma", fd.slope, fd.r2});
  out.fits.push_back({"g_first_vs_sigma", ff.slope, ff.r2});

  if (cfg.sigma_ratio_grid.size() >= 2) {
    out.assertions.push_back({"slope-direct-lower", fd.slope, 0.8, fd.slope >= 0.8});
    out.assertions.push_back({"slope-direct-upper", fd.slope, 1.2, fd.slope <= 1.2});
    // Grid entries may come in any order; compare smallest sigma against largest.
    std::size_t lo = 0, hi = 0;
    for (std::size_t gi = 1; gi < cfg.sigma_ratio_grid.size(); ++gi) {
      if (cfg.sigma_ratio_grid[gi] < cfg.sigma_ratio_grid[lo]) lo = gi;
      if (cfg.sigma_ratio_grid[gi] > cfg.sigma_ratio_grid[hi]) hi = gi;
    }
    Assertion a;
    a.name = "firstorder-gap-shrinks";
    a.value = mean_ratio[lo];
    a.bound = 0.6 * mean_ratio[hi];
    a.pass = std::isfinite(a.value) && a.value <= a.bound;
    out.assertions.push_back(a);
  }
  return out;
}

// ---------------------------------------------------------------------------
// sbm-phase: exact-recovery rate across the (a, b) density grid
// ---------------------------------------------------------------------------

inline SweepOutput sbm_phase_grid(const SweepConfig& cfg) {
  cfg.validate();
  SweepOutput out;
  out.experiment = "sbm_phase";
  out.columns = {"n", "a", "b", "trials", "successes", "success_rate", "hellinger_ratio"};

  const Eigen::Index n = cfg.n_grid[0];
  require(n % 2 == 0, "sbm-phase: n must be even");
  const double log_n = std::log(static_cast<double>(n));

  std::size_t grid_index = 0;
  for (double a : cfg.a_grid) {
    for (double b : cfg.b_grid) {
      if (a < b) continue;  // below the diagonal; mirrored by symmetry
      const double p = a * log_n / static_cast<double>(n);
      const double q = b * log_n / static_cast<double>(n);
      require(p <= 1.0, "sbm-phase: a log n / n exceeds 1");
      std::vector<int> success(static_cast<std::size_t>(cfg.trials), 0);
      detail::run_indexed(cfg.trials, cfg.jobs, [&](int t) {
        const std::uint64_t seed = rng::derive(rng::derive(cfg.master_seed, grid_index), static_cast<std::uint64_t>(t));
        SymMatrix m = SymMatrix::zero(n);
        Eigen::VectorXi truth;
        if (a == b) {
          // Degenerate diagonal point: the centered matrix has zero mean.
          CounterRng gen(rng::derive(seed, 0x73626dULL));
          Matrix adj = Matrix::Zero(n, n);
          for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) {
              const double edge = gen.next_unit() < p ? 1.0 : 0.0;
              adj(i, j) = edge;
              adj(j, i) = edge;
            }
          Matrix mm = adj;
          mm.array() -= p;
          mm.diagonal().array() += p;
          m = SymMatrix::from_symmetric_unchecked(std::move(mm));
          truth.setOnes(n);
          truth.tail(n / 2).setConstant(-1);
        } else {
          SbmInstance inst = sbm_instance(n, p, q, seed);
          m = inst.m;
          truth = inst.labels;
        }
        const Eigen::VectorXi labels = sbm_classify(m);
        success[static_cast<std::size_t>(t)] = classification_accuracy(labels, truth) == 1.0 ? 1 : 0;
      });
      int successes = 0;
      for (int s : success) successes += s;
      const double rate = static_cast<double>(successes) / static_cast<double>(cfg.trials);
      const HellingerThreshold h = hellinger_threshold(p, q, n);
      out.rows.push_back({std::to_string(n), fmt_double(a), fmt_double(b), std::to_string(cfg.trials),
                          std::to_string(successes), fmt_double(rate), fmt_double(h.ratio)});

      if (h.ratio >= 2.0 && a != b) {
        out.assertions.push_back({"recovery-above-threshold-a" + fmt_double(a, 6) + "-b" + fmt_double(b, 6),
                                  rate, 0.9, rate >= 0.9});
      } else if (h.ratio > 0 && h.ratio <= 0.5) {
        out.assertions.push_back({"failure-below-threshold-a" + fmt_double(a, 6) + "-b" + fmt_double(b, 6),
                                  rate, 0.2, rate <= 0.2});
      }
      out.plot_points.emplace_back(h.ratio, rate);
      ++grid_index;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// mc-entrywise: entrywise completion error de-localizes faster than the
// Frobenius error
// ---------------------------------------------------------------------------

inline SweepOutput mc_entrywise_sweep(const SweepConfig& cfg) {
  cfg.validate();
  require(cfg.p > 0 && cfg.p <= 1, "mc-entrywise: p must lie in (0, 1]");
  SweepOutput out;
  out.experiment = "mc_entrywise";
  out.columns = {"n", "r", "p", "trial", "seed", "err_inf", "err_fro", "ratio"};

  struct Row {
    double err_inf = 0, err_fro = 0, ratio = 0;
    std::uint64_t seed = 0;
  };

  std::vector<double> mean_ratio_per_n;
  for (std::size_t gi = 0; gi < cfg.n_grid.size(); ++gi) {
    const Eigen::Index n = cfg.n_grid[gi];
    std::vector<Row> rows(static_cast<std::size_t>(cfg.trials));
    detail::run_indexed(cfg.trials, cfg.jobs, [&](int t) {
      const std::uint64_t seed = rng::derive(rng::derive(cfg.master_seed, gi), static_cast<std::uint64_t>(t));
      CounterRng gen(rng::derive(seed, 0x6d63ULL));
      Matrix u(n, cfg.r), v(n, cfg.r);
      for (Eigen::Index j = 0; j < cfg.r; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) u(i, j) = gen.next_gaussian();
        for (Eigen::Index i = 0; i < n; ++i) v(i, j) = gen.next_gaussian();
      }
      const Matrix uq = Eigen::HouseholderQR<Matrix>(u).householderQ() * Matrix::Identity(n, cfg.r);
      const Matrix vq = Eigen::HouseholderQR<Matrix>(v).householderQ() * Matrix::Identity(n, cfg.r);
      Vector sv(cfg.r);
      for (Eigen::Index j = 0; j < cfg.r; ++j) {
        const double t01 = cfg.r == 1 ? 0.0 : static_cast<double>(j) / static_cast<double>(cfg.r - 1);
        sv(j) = cfg.kappa + (1.0 - cfg.kappa) * t01;
      }
      const Matrix mstar = uq * sv.asDiagonal() * vq.transpose();
      const CompletionInstance ci = completion_instance(mstar, cfg.p, seed);
      const CompletionResult res = complete_matrix(ci.m, cfg.r);
      Row& row = rows[static_cast<std::size_t>(t)];
      row.seed = seed;
      row.err_inf = entry_inf_norm(res.estimate - mstar);
      row.err_fro = (res.estimate - mstar).norm();
      row.ratio = row.err_fro > detail::kDegenerateFloor
                      ? row.err_inf / row.err_fro
                      : std::numeric_limits<double>::quiet_NaN();
    });
    std::vector<double> ratios;
    for (int t = 0; t < cfg.trials; ++t) {
      const Row& row = rows[static_cast<std::size_t>(t)];
      out.rows.push_back({std::to_string(n), std::to_string(cfg.r), fmt_double(cfg.p), std::to_string(t),
                          std::to_string(row.seed), fmt_double(row.err_inf), fmt_double(row.err_fro),
                          fmt_double(row.ratio)});
      ratios.push_back(row.ratio);
    }
    mean_ratio_per_n.push_back(detail::mean_finite(ratios));
  }

  std::vector<std::pair<double, double>> pts;
  for (std::size_t gi = 0; gi < cfg.n_grid.size(); ++gi)
    pts.emplace_back(static_cast<double>(cfg.n_grid[gi]), mean_ratio_per_n[gi]);
  out.plot_points = pts;
  const detail::OlsFit fit = detail::log_log_fit(pts);
  out.fits.push_back({"entrywise_ratio_vs_n", fit.slope, fit.r2});

  if (cfg.n_grid.size() >= 2) {
    Assertion a;
    a.name = "entrywise-ratio-cap";
    a.value = mean_ratio_per_n.back() / mean_ratio_per_n.front();
    a.bound = 0.5;
    a.pass = std::isfinite(a.value) && a.value <= a.bound;
    out.assertions.push_back(a);
  }
  return out;
}

// ---------------------------------------------------------------------------
// certificates: aggregated pass rates per certificate id
// ---------------------------------------------------------------------------

struct CertTally {
  long holds = 0;
  long violated = 0;
  long precondition_not_met = 0;
  long trials = 0;
};

inline SweepOutput certificate_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepOutput out;
  out.experiment = "certificates";
  out.columns = {"cert_id", "holds", "violated", "precondition_not_met", "trials"};

  std::map<std::string, CertTally> tally;
  std::string detail_csv = "n,r,sigma_ratio,trial,seed,mu_achieved,kappa,e_spectral,cert_id,status\n";

  std::size_t grid_index = 0;
  for (Eigen::Index n : cfg.n_grid) {
    for (double sigma_ratio : cfg.sigma_ratio_grid) {
      std::vector<std::vector<BoundCertificate>> per_trial(static_cast<std::size_t>(cfg.trials));
      std::vector<std::uint64_t> seeds(static_cast<std::size_t>(cfg.trials));
      std::vector<double> mus(static_cast<std::size_t>(cfg.trials));
      std::vector<double> especs(static_cast<std::size_t>(cfg.trials));
      detail::run_indexed(cfg.trials, cfg.jobs, [&](int t) {
        const std::uint64_t seed = rng::derive(rng::derive(cfg.master_seed, grid_index), static_cast<std::uint64_t>(t));
        const Instance inst = detail::trial_instance(n, cfg.r, cfg.mu, cfg.kappa, sigma_ratio, cfg.family, seed);
        const LooEnsemble ens = build_ensemble(inst);
        std::vector<BoundCertificate> certs = lemma_certificates(inst, ens, cfg.constants);
        if (cfg.r == 1) {
          std::vector<BoundCertificate> r1 = rank1_chain(inst, ens, cfg.constants);
          certs.insert(certs.end(), r1.begin(), r1.end());
        }
        per_trial[static_cast<std::size_t>(t)] = std::move(certs);
        seeds[static_cast<std::size_t>(t)] = seed;
        mus[static_cast<std::size_t>(t)] = inst.mu;
        especs[static_cast<std::size_t>(t)] = spectral_norm(inst.e.mat());
      });
      for (int t = 0; t < cfg.trials; ++t) {
        for (const auto& c : per_trial[static_cast<std::size_t>(t)]) {
          CertTally& ct = tally[c.id];
          ct.trials += 1;
          switch (c.status) {
            case CertStatus::Holds: ct.holds += 1; break;
            case CertStatus::Violated: ct.violated += 1; break;
            case CertStatus::PreconditionNotMet: ct.precondition_not_met += 1; break;
          }
          detail_csv += std::to_string(n) + "," + std::to_string(cfg.r) + "," + fmt_double(sigma_ratio) +
                        "," + std::to_string(t) + "," + std::to_string(seeds[static_cast<std::size_t>(t)]) +
                        "," + fmt_double(mus[static_cast<std::size_t>(t)]) + "," + fmt_double(cfg.kappa) +
                        "," + fmt_double(especs[static_cast<std::size_t>(t)]) + "," + c.id + "," +
                        to_string(c.status) + "\n";
        }
      }
      ++grid_index;
    }
  }

  double worst_rate = 0;
  for (const auto& [id, ct] : tally) {
    out.rows.push_back({id, std::to_string(ct.holds), std::to_string(ct.violated),
                        std::to_string(ct.precondition_not_met), std::to_string(ct.trials)});
    const double rate = ct.trials > 0 ? static_cast<double>(ct.violated) / static_cast<double>(ct.trials) : 0;
    worst_rate = std::max(worst_rate, rate);
    if (ct.violated > 0) {
      out.assertions.push_back({"violation-rate-" + id, rate, cfg.constants.violation_allowance,
                                rate <= cfg.constants.violation_allowance});
    }
  }
  out.assertions.push_back({"max-violation-rate", worst_rate, cfg.constants.violation_allowance,
                            worst_rate <= cfg.constants.violation_allowance});
  out.extra_name = "certificates_detail.csv";
  out.extra_content = std::move(detail_csv);
  return out;
}

// Minimal self-contained plot: axes plus one polyline through the grid means.
inline std::string render_svg(const std::string& title, const std::vector<std::pair<double, double>>& pts) {
  const double w = 480, h = 320, m = 48;
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_double(w, 6) +
                    "\" height=\"" + fmt_double(h, 6) + "\">\n";
  svg += "<text x=\"12\" y=\"20\" font-size=\"13\">" + json_escape(title) + "</text>\n";
  svg += "<line x1=\"" + fmt_double(m, 6) + "\" y1=\"" + fmt_double(h - m, 6) + "\" x2=\"" + fmt_double(w - m, 6) +
         "\" y2=\"" + fmt_double(h - m, 6) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt_double(m, 6) + "\" y1=\"" + fmt_double(h - m, 6) + "\" x2=\"" + fmt_double(m, 6) +
         "\" y2=\"" + fmt_double(m, 6) + "\" stroke=\"black\"/>\n";
  std::vector<std::pair<double, double>> good;
  for (const auto& p : pts)
    if (std::isfinite(p.first) && std::isfinite(p.second)) good.push_back(p);
  if (good.size() >= 2) {
    double xmin = good[0].first, xmax = good[0].first, ymin = good[0].second, ymax = good[0].second;
    for (const auto& [x, y] : good) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    svg += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : good) {
      const double px = m + (x - xmin) / (xmax - xmin) * (w - 2 * m);
      const double py = h - m - (y - ymin) / (ymax - ymin) * (h - 2 * m);
      svg += fmt_double(px, 8) + "," + fmt_double(py, 8) + " ";
    }
    svg += "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace specp
