#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "test_helpers.hpp"

#include "specp/specp.hpp"

using namespace specp;
using Catch::Approx;

namespace {

Instance noisy_instance(Eigen::Index n, Eigen::Index r, double sigma_ratio, std::uint64_t seed,
                        NoiseFamily family = NoiseFamily::BoundedUniform, double kappa = 2.0,
                        double mu_target = 1.0) {
  InstanceSpec spec;
  spec.n = n;
  spec.r = r;
  spec.lambdas = Vector(r);
  if (r == 1) {
    spec.lambdas(0) = 1.0;
    spec.kappa = 1.0;
  } else {
    for (Eigen::Index i = 0; i < r; ++i)
      spec.lambdas(i) = kappa + (1.0 - kappa) * static_cast<double>(i) / static_cast<double>(r - 1);
    spec.kappa = kappa;
  }
  spec.mu_target = mu_target;
  spec.noise.family = family;
  spec.noise.sigma = sigma_ratio / std::sqrt(static_cast<double>(n));
  spec.noise.seed = seed;
  return make_instance(spec);
}

const BoundCertificate& find_cert(const std::vector<BoundCertificate>& certs, const std::string& id) {
  for (const auto& c : certs)
    if (c.id == id) return c;
  throw std::runtime_error("certificate not found: " + id);
}

}  // namespace

TEST_CASE("zero noise: every certificate holds with zero lhs where applicable") {
  const Instance inst = noisy_instance(15, 2, 0.0, 1);
  const LooEnsemble ens = build_ensemble(inst);
  const auto certs = lemma_certificates(inst, ens);
  REQUIRE(certs.size() >= 30);
  for (const auto& c : certs) {
    INFO(c.id);
    REQUIRE(c.status == CertStatus::Holds);
  }
  REQUIRE(find_cert(certs, "L1-spec-norm").lhs == 0.0);
  REQUIRE(find_cert(certs, "L4-first").lhs <= 1e-12);
}

TEST_CASE("warm-up 2x2: the distance certificate reports precondition-not-met") {
  Matrix mstar(2, 2), e(2, 2);
  mstar << 1.1, 0, 0, 0.9;
  e << -0.1, 0.1, 0.1, 0.1;
  const Instance inst = instance_from_parts(SymMatrix(mstar), SymMatrix(e), 1, 0.1, 0.1);
  const LooEnsemble ens = build_ensemble(inst);
  const auto certs = lemma_certificates(inst, ens);

  const BoundCertificate& l2 = find_cert(certs, "L2-dist");
  REQUIRE(l2.status == CertStatus::PreconditionNotMet);
  bool found_gap = false;
  for (const auto& p : l2.preconditions) {
    if (p.name == "dk-gap") {
      found_gap = true;
      REQUIRE(p.lhs == Approx(0.1 * std::sqrt(2.0)).margin(1e-12));  // ||E|| = 0.1 sqrt(2)
      REQUIRE(p.rhs == Approx((1.0 - 1.0 / std::sqrt(2.0)) * 0.2).margin(1e-12));
      REQUIRE_FALSE(p.satisfied);
    }
  }
  REQUIRE(found_gap);
}

TEST_CASE("certificate status rule is consistent with its recorded fields") {
  const Instance inst = noisy_instance(40, 2, 0.01, 3);
  const LooEnsemble ens = build_ensemble(inst);
  for (const auto& c : lemma_certificates(inst, ens)) {
    bool pres_ok = true;
    for (const auto& p : c.preconditions) pres_ok = pres_ok && p.satisfied;
    const double tol = 1e-9 * std::max(1.0, c.rhs);
    if (!pres_ok)
      REQUIRE(c.status == CertStatus::PreconditionNotMet);
    else if (c.lhs <= c.rhs + tol)
      REQUIRE(c.status == CertStatus::Holds);
    else
      REQUIRE(c.status == CertStatus::Violated);
    REQUIRE(c.slack == c.rhs - c.lhs);
  }
}

TEST_CASE("certificate soundness re-checked from raw matrices") {
  const Instance inst = noisy_instance(30, 2, 0.01, 9);
  const LooEnsemble ens = build_ensemble(inst);
  const auto certs = lemma_certificates(inst, ens);

  // L1-spec-norm: ||E|| via the power-iteration oracle.
  const BoundCertificate& l1 = find_cert(certs, "L1-spec-norm");
  REQUIRE(l1.lhs == Approx(oracle::power_spectral_norm(testutil::to_rows(inst.e.mat()))).margin(1e-8));
  REQUIRE(l1.rhs == Approx(3.0 * inst.sigma * std::sqrt(30.0)).margin(1e-12));

  // L4-first: recompute both sides from scratch.
  const Estimate est = compute_estimate(inst);
  const Matrix uh = est.u * est.h;
  const Matrix target = inst.m.mat() * inst.ustar.basis() * inst.lambdastar.cwiseInverse().asDiagonal();
  const double lhs = two_inf_norm(uh - target);
  const double e1 = 2.0 * two_inf_norm(inst.m.mat() * (uh - inst.ustar.basis())) / inst.lambda_r();
  const double e2 = 4.0 * two_inf_norm(inst.m.mat() * inst.ustar.basis()) *
                    oracle::power_spectral_norm(testutil::to_rows(inst.e.mat())) /
                    (inst.lambda_r() * inst.lambda_r());
  const BoundCertificate& l4 = find_cert(certs, "L4-first");
  REQUIRE(l4.lhs == Approx(lhs).margin(1e-12));
  REQUIRE(l4.rhs == Approx(e1 + e2).margin(1e-7));
  if (l4.status == CertStatus::Holds) REQUIRE(l4.lhs <= l4.rhs + 1e-9 * std::max(1.0, l4.rhs));

  // S3-Mstar-angle from scratch.
  const BoundCertificate& s3 = find_cert(certs, "S3-Mstar-angle");
  REQUIRE(s3.lhs == Approx(two_inf_norm(inst.mstar.mat() * (uh - inst.ustar.basis()))).margin(1e-12));
}

TEST_CASE("deterministic-algebra certificates never report violated across seeds") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = noisy_instance(40, 2, 0.01, 100 + seed);
    const LooEnsemble ens = build_ensemble(inst);
    const auto certs = lemma_certificates(inst, ens);
    for (const char* id : {"L4-first", "L4-first-ustar", "S3-Mstar", "S3-Mstar-angle",
                           "S2-surrogate", "H-sandwich", "gap-size-move", "L1-spec-norm-loo"}) {
      INFO(id << " seed " << seed);
      REQUIRE(find_cert(certs, id).status != CertStatus::Violated);
    }
  }
}

TEST_CASE("combined leave-one-out certificates can hold in a tiny-noise regime") {
  // The 320 B log n <= lambda_r* style preconditions need very small noise;
  // rademacher keeps B = sigma.
  const Instance inst = noisy_instance(200, 2, 0.0005, 5, NoiseFamily::RademacherScaled);
  const LooEnsemble ens = build_ensemble(inst);
  const auto certs = lemma_certificates(inst, ens);
  REQUIRE(find_cert(certs, "S2-combined-surrogate").status == CertStatus::Holds);
  REQUIRE(find_cert(certs, "S2-combined-row").status == CertStatus::Holds);
}

TEST_CASE("combined certificates are precondition-gated at moderate noise") {
  const Instance inst = noisy_instance(60, 2, 0.01, 7);
  const LooEnsemble ens = build_ensemble(inst);
  const auto certs = lemma_certificates(inst, ens);
  REQUIRE(find_cert(certs, "S2-combined-surrogate").status == CertStatus::PreconditionNotMet);
  REQUIRE(find_cert(certs, "S2-combined-row").status == CertStatus::PreconditionNotMet);
}

TEST_CASE("huge noise: smallness preconditions fail, nothing is 'violated'") {
  const Instance inst = noisy_instance(30, 2, 30.0, 11);
  const LooEnsemble ens = build_ensemble(inst);
  int not_met = 0, violated = 0;
  for (const auto& c : lemma_certificates(inst, ens)) {
    not_met += c.status == CertStatus::PreconditionNotMet ? 1 : 0;
    violated += c.status == CertStatus::Violated ? 1 : 0;
  }
  REQUIRE(not_met >= 15);
  REQUIRE(violated == 0);
}

TEST_CASE("rank-1 chain: zero noise holds with zero lhs") {
  const Instance inst = noisy_instance(20, 1, 0.0, 13);
  const LooEnsemble ens = build_ensemble(inst);
  for (const auto& c : rank1_chain(inst, ens)) {
    INFO(c.id);
    REQUIRE(c.status == CertStatus::Holds);
    REQUIRE(c.lhs <= 1e-12);
  }
}

TEST_CASE("rank-1 chain: artificially huge noise is precondition-not-met") {
  const Instance inst = noisy_instance(50, 1, 1.0, 15);  // sigma sqrt(n) = lambda*
  const LooEnsemble ens = build_ensemble(inst);
  const auto certs = rank1_chain(inst, ens);
  const BoundCertificate& final_cert = find_cert(certs, "R1-final");
  REQUIRE(final_cert.status == CertStatus::PreconditionNotMet);
  bool smallness_checked = false;
  for (const auto& p : final_cert.preconditions)
    if (p.name == "eighty-smallness") {
      smallness_checked = true;
      REQUIRE_FALSE(p.satisfied);  // 80 sigma sqrt(n) = 80 lambda* > lambda*
    }
  REQUIRE(smallness_checked);
}

TEST_CASE("rank-1 chain holds at moderate noise") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Instance inst = noisy_instance(100, 1, 0.005, 200 + seed, NoiseFamily::TruncatedGaussian);
    const LooEnsemble ens = build_ensemble(inst);
    for (const auto& c : rank1_chain(inst, ens)) {
      INFO(c.id << " seed " << seed);
      REQUIRE(c.status == CertStatus::Holds);
    }
  }
}

TEST_CASE("rank1_chain rejects rank above one") {
  const Instance inst = noisy_instance(10, 2, 0.01, 17);
  const LooEnsemble ens = build_ensemble(inst);
  REQUIRE_THROWS_AS(rank1_chain(inst, ens), std::invalid_argument);
}

TEST_CASE("rank1_final_certificate matches the full chain's final bound") {
  const Instance inst = noisy_instance(80, 1, 0.005, 19, NoiseFamily::TruncatedGaussian);
  const LooEnsemble ens = build_ensemble(inst);
  const BoundCertificate light = rank1_final_certificate(inst);
  const BoundCertificate& full = find_cert(rank1_chain(inst, ens), "R1-final");
  REQUIRE(light.lhs == Approx(full.lhs).margin(1e-14));
  REQUIRE(light.rhs == Approx(full.rhs).margin(1e-14));
}

TEST_CASE("certificates serialize to JSON with fixed field order and 17 digits") {
  const Instance inst = noisy_instance(12, 2, 0.01, 21);
  const LooEnsemble ens = build_ensemble(inst);
  const auto certs = lemma_certificates(inst, ens);
  const std::string json = certificates_to_json(certs);

  const auto id_pos = json.find("\"id\"");
  const auto label_pos = json.find("\"label\"");
  const auto anchor_pos = json.find("\"paper_anchor\"");
  const auto pre_pos = json.find("\"preconditions\"");
  const auto lhs_pos = json.find("\"lhs\"", pre_pos);
  const auto rhs_pos = json.find("\"rhs\"", lhs_pos);
  const auto slack_pos = json.find("\"slack\"", rhs_pos);
  const auto status_pos = json.find("\"status\"", slack_pos);
  REQUIRE(id_pos < label_pos);
  REQUIRE(label_pos < anchor_pos);
  REQUIRE(anchor_pos < pre_pos);
  REQUIRE(pre_pos < lhs_pos);
  REQUIRE(lhs_pos < rhs_pos);
  REQUIRE(rhs_pos < slack_pos);
  REQUIRE(slack_pos < status_pos);

  // Round-trip precision: a known irrational value keeps 17 significant digits.
  REQUIRE(fmt_double(0.1234567890123456789) == "0.12345678901234568");
  REQUIRE(fmt_double(1.0 / 3.0).size() >= 18);
}

TEST_CASE("json output is parseable and has one object per certificate") {
  const Instance inst = noisy_instance(10, 1, 0.01, 23);
  const LooEnsemble ens = build_ensemble(inst);
  auto certs = lemma_certificates(inst, ens);
  const auto r1 = rank1_chain(inst, ens);
  certs.insert(certs.end(), r1.begin(), r1.end());
  const std::string json = certificates_to_json(certs);
  std::size_t count = 0, pos = 0;
  while ((pos = json.find("{\"id\"", pos)) != std::string::npos) {
    ++count;
    ++pos;
  }
  REQUIRE(count == certs.size());
}
