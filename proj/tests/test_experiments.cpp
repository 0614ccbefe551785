#include <catch2/catch_amalgamated.hpp>

#include "specp/specp.hpp"

using namespace specp;
using Catch::Approx;

namespace {

SweepConfig base_config(const std::string& experiment) {
  SweepConfig cfg;
  cfg.experiment = experiment;
  cfg.master_seed = 42;
  cfg.trials = 4;
  cfg.jobs = 1;
  return cfg;
}

}  // namespace

TEST_CASE("scaling sweep: schema, determinism, and order independence") {
  SweepConfig cfg = base_config("scaling");
  cfg.n_grid = {30, 60};
  cfg.r = 2;
  cfg.kappa = 1.0;
  cfg.sigma_ratio_grid = {0.01};

  const SweepOutput a = scaling_sweep(cfg);
  REQUIRE(a.csv().rfind("experiment,n,r,mu_target,mu_achieved,kappa,sigma_ratio,trial,seed,dist_fro,two_inf,ratio\n", 0) == 0);
  REQUIRE(a.rows.size() == 8);

  const SweepOutput b = scaling_sweep(cfg);
  REQUIRE(a.csv() == b.csv());
  REQUIRE(a.summary_json("x") == b.summary_json("x"));

  SweepConfig par = cfg;
  par.jobs = 2;
  const SweepOutput c = scaling_sweep(par);
  REQUIRE(a.csv() == c.csv());
}

TEST_CASE("scaling sweep with zero noise records NaN ratios and excludes them from fits") {
  SweepConfig cfg = base_config("scaling");
  cfg.n_grid = {20, 40};
  cfg.sigma_ratio_grid = {0.0};
  cfg.trials = 2;
  const SweepOutput out = scaling_sweep(cfg);
  for (const auto& row : out.rows) REQUIRE(row.back() == "nan");
  bool degenerate_found = false;
  for (const auto& a : out.assertions)
    if (a.name == "degenerate-count") {
      degenerate_found = true;
      REQUIRE(a.value == 4.0);
    }
  REQUIRE(degenerate_found);
  REQUIRE(out.fits[0].slope == 0.0);  // no usable points
}

TEST_CASE("single grid point with one trial is byte-stable across runs") {
  SweepConfig cfg = base_config("scaling");
  cfg.n_grid = {25};
  cfg.trials = 1;
  const std::string csv1 = scaling_sweep(cfg).csv();
  const std::string csv2 = scaling_sweep(cfg).csv();
  REQUIRE(csv1 == csv2);
}

TEST_CASE("first-order sweep: schema and slope bookkeeping") {
  SweepConfig cfg = base_config("first_order");
  cfg.n_grid = {60};
  cfg.r = 1;
  cfg.kappa = 1.0;
  cfg.sigma_ratio_grid = {0.02, 0.002};
  cfg.trials = 6;
  const SweepOutput out = first_order_sweep(cfg);
  REQUIRE(out.csv().rfind("experiment,n,r,mu_target,mu_achieved,kappa,sigma_ratio,trial,seed,g_direct,g_first,ratio_fg\n", 0) == 0);
  REQUIRE(out.rows.size() == 12);
  REQUIRE(out.fits.size() == 2);
  REQUIRE(out.fits[0].name == "g_direct_vs_sigma");
  // Direct gap scales linearly in sigma.
  REQUIRE(out.fits[0].slope == Approx(1.0).margin(0.25));
  bool shrink_assert = false;
  for (const auto& a : out.assertions)
    if (a.name == "firstorder-gap-shrinks") shrink_assert = true;
  REQUIRE(shrink_assert);
}

TEST_CASE("sbm phase grid: schema, diagonal handling, hellinger column") {
  SweepConfig cfg = base_config("sbm_phase");
  cfg.n_grid = {60};
  cfg.a_grid = {6.0, 2.0};
  cfg.b_grid = {2.0, 6.0};  // the (2, 6) pair is below the diagonal and skipped
  cfg.trials = 3;
  const SweepOutput out = sbm_phase_grid(cfg);
  REQUIRE(out.csv().rfind("n,a,b,trials,successes,success_rate,hellinger_ratio\n", 0) == 0);
  REQUIRE(out.rows.size() == 3);  // (6,2), (6,6), (2,2)

  // Diagonal rows run without error and carry a zero Hellinger ratio.
  int diagonal_rows = 0;
  for (const auto& row : out.rows)
    if (row[1] == row[2]) {
      ++diagonal_rows;
      REQUIRE(row[6] == "0");
    }
  REQUIRE(diagonal_rows == 2);
}

TEST_CASE("mc entrywise sweep: schema and determinism") {
  SweepConfig cfg = base_config("mc_entrywise");
  cfg.n_grid = {24, 48};
  cfg.r = 2;
  cfg.kappa = 2.0;
  cfg.p = 0.6;
  cfg.trials = 3;
  const SweepOutput out = mc_entrywise_sweep(cfg);
  REQUIRE(out.csv().rfind("n,r,p,trial,seed,err_inf,err_fro,ratio\n", 0) == 0);
  REQUIRE(out.rows.size() == 6);
  REQUIRE(out.csv() == mc_entrywise_sweep(cfg).csv());
}

TEST_CASE("certificate sweep: schema, zero-noise all-holds, and failure policy") {
  SweepConfig cfg = base_config("certificates");
  cfg.n_grid = {16};
  cfg.r = 2;
  cfg.kappa = 2.0;
  cfg.sigma_ratio_grid = {0.0};
  cfg.trials = 2;
  const SweepOutput out = certificate_sweep(cfg);
  REQUIRE(out.csv().rfind("cert_id,holds,violated,precondition_not_met,trials\n", 0) == 0);
  for (const auto& row : out.rows) {
    INFO(row[0]);
    REQUIRE(row[2] == "0");                      // no violations
    REQUIRE(row[1] == std::to_string(cfg.trials));  // everything holds
  }
  REQUIRE(out.all_pass());
  REQUIRE(out.extra_name == "certificates_detail.csv");
  REQUIRE(out.extra_content.rfind("n,r,sigma_ratio,trial,seed,mu_achieved,kappa,e_spectral,cert_id,status\n", 0) == 0);
}

TEST_CASE("certificate sweep at extreme noise: preconditions gate everything") {
  SweepConfig cfg = base_config("certificates");
  cfg.n_grid = {16};
  cfg.r = 2;
  cfg.kappa = 2.0;
  cfg.sigma_ratio_grid = {25.0};
  cfg.trials = 2;
  const SweepOutput out = certificate_sweep(cfg);
  long violated = 0, not_met = 0;
  for (const auto& row : out.rows) {
    violated += std::stol(row[2]);
    not_met += std::stol(row[3]);
  }
  REQUIRE(violated == 0);
  REQUIRE(not_met > 0);
  REQUIRE(out.all_pass());
}

TEST_CASE("summary json carries experiment, digest, fits, and assertions") {
  SweepConfig cfg = base_config("scaling");
  cfg.n_grid = {20};
  cfg.trials = 1;
  const SweepOutput out = scaling_sweep(cfg);
  const std::string json = out.summary_json(cfg.digest());
  REQUIRE(json.find("\"experiment\": \"scaling\"") != std::string::npos);
  REQUIRE(json.find("\"config_digest\": \"" + cfg.digest() + "\"") != std::string::npos);
  REQUIRE(json.find("\"fits\"") != std::string::npos);
  REQUIRE(json.find("\"assertions\"") != std::string::npos);
  REQUIRE(json.find("\"slope\"") != std::string::npos);
  REQUIRE(json.find("\"r2\"") != std::string::npos);
}

TEST_CASE("config digest changes with the config") {
  SweepConfig a = base_config("scaling");
  SweepConfig b = a;
  b.master_seed = 43;
  REQUIRE(a.digest() != b.digest());
  REQUIRE(a.digest() == base_config("scaling").digest());
}

TEST_CASE("config validation rejects bad values") {
  SweepConfig cfg = base_config("scaling");
  cfg.trials = 0;
  REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = base_config("scaling");
  cfg.n_grid.clear();
  REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = base_config("scaling");
  cfg.format = "xml";
  REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("svg rendering produces a polyline for valid points") {
  const std::string svg = render_svg("demo", {{1.0, 2.0}, {2.0, 1.0}, {3.0, 0.5}});
  REQUIRE(svg.find("<svg") != std::string::npos);
  REQUIRE(svg.find("<polyline") != std::string::npos);
  REQUIRE(svg.find("</svg>") != std::string::npos);
}
