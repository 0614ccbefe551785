#pragma once

#include "specp/experiments.hpp"
#include "specp/serialize.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace specp {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CliInvocation {
  std::string subcommand;
  std::map<std::string, std::string> overrides;  // flag name without dashes -> raw value
  std::string config_path;
};

inline const std::set<std::string>& known_subcommands() {
  static const std::set<std::string> cmds{"verify",    "rank1",        "scaling", "first-order",
                                          "sbm-phase", "mc-entrywise", "certificates"};
  return cmds;
}

inline const std::set<std::string>& known_keys() {
  // Flag names with every dash removed; config-file keys use the same names.
  static const std::set<std::string> keys{"n",     "r",    "sigmaratio", "kappa",  "mu",  "a",
                                          "b",     "p",    "trials",     "seed",   "outdir",
                                          "format", "jobs"};
  return keys;
}

inline std::string usage_text() {
  return
      "usage: specperturb <subcommand> [flags]\n"
      "\n"
      "subcommands:\n"
      "  verify        identities and certificates on one instance\n"
      "  rank1         rank-1 chain certificates over Monte Carlo trials\n"
      "  scaling       row-wise vs Frobenius error across n\n"
      "  first-order   error against the first-order target across sigma\n"
      "  sbm-phase     exact-recovery rates over the (a, b) density grid\n"
      "  mc-entrywise  completion entrywise vs Frobenius error across n\n"
      "  certificates  aggregated certificate pass rates\n"
      "\n"
      "flags (comma-separated lists make a grid where applicable):\n"
      "  --n, --r, --sigma-ratio, --kappa, --mu, --a, --b, --p,\n"
      "  --trials, --seed, --out-dir, --config, --format {csv|json}, --jobs\n"
      "\n"
      "precedence: flag > SPECTRAL_PERTURB_SEED (seed only) > config file > default\n";
}

inline CliInvocation parse(const std::vector<std::string>& args) {
  if (args.empty()) throw UsageError("missing subcommand");
  CliInvocation inv;
  inv.subcommand = args[0];
  if (known_subcommands().count(inv.subcommand) == 0)
    throw UsageError("unknown subcommand: " + inv.subcommand);
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg.rfind("--", 0) != 0) throw UsageError("expected flag, got: " + arg);
    std::string key;
    for (char c : arg.substr(2))
      if (c != '-') key += c;
    if (key == "config") {
      if (i + 1 >= args.size()) throw UsageError("missing value for --config");
      inv.config_path = args[++i];
      continue;
    }
    if (known_keys().count(key) == 0) throw UsageError("unknown flag: " + arg);
    if (i + 1 >= args.size()) throw UsageError("missing value for " + arg);
    inv.overrides[key] = args[++i];
  }
  return inv;
}

namespace detail {

inline std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    std::size_t b = line.find_last_not_of(" \t\r");
    line = line.substr(a, b - a + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("malformed config line: " + line);
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    const auto trim = [](std::string& s) {
      const auto l = s.find_first_not_of(" \t");
      const auto r = s.find_last_not_of(" \t");
      s = l == std::string::npos ? "" : s.substr(l, r - l + 1);
    };
    trim(key);
    trim(value);
    if (known_keys().count(key) == 0) throw UsageError("unknown config key: " + key);
    kv[key] = value;
  }
  return kv;
}

inline double parse_number(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw UsageError("malformed number for " + key + ": " + value);
  }
}

inline std::vector<double> parse_grid(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(key, item));
  if (out.empty()) throw UsageError("empty grid for " + key);
  return out;
}

inline std::uint64_t parse_seed(const std::string& value) {
  try {
    if (value.empty() || value[0] == '-') throw std::invalid_argument(value);
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return static_cast<std::uint64_t>(x);
  } catch (const std::exception&) {
    throw UsageError("malformed seed: " + value);
  }
}

struct KeyLookup {
  const std::map<std::string, std::string>& flags;
  const std::map<std::string, std::string>& file;

  std::optional<std::string> get(const std::string& key) const {
    if (auto it = flags.find(key); it != flags.end()) return it->second;
    if (auto it = file.find(key); it != file.end()) return it->second;
    return std::nullopt;
  }
};

}  // namespace detail

// Assemble the effective sweep configuration: flag beats env (seed only)
// beats config file beats built-in defaults.
inline SweepConfig effective_config(const CliInvocation& inv) {
  std::map<std::string, std::string> file_kv;
  if (!inv.config_path.empty()) file_kv = detail::read_config_file(inv.config_path);
  detail::KeyLookup kv{inv.overrides, file_kv};

  SweepConfig cfg;
  cfg.experiment = inv.subcommand;

  // Subcommand defaults; documented in the README.
  if (inv.subcommand == "scaling") {
    cfg.n_grid = {100, 800};
    cfg.r = 2;
    cfg.sigma_ratio_grid = {0.01};
    cfg.kappa = 1;
    cfg.trials = 30;
  } else if (inv.subcommand == "first-order") {
    cfg.n_grid = {400};
    cfg.r = 1;
    cfg.sigma_ratio_grid = {0.02, 0.002};
    cfg.kappa = 1;
    cfg.trials = 30;
  } else if (inv.subcommand == "sbm-phase") {
    cfg.n_grid = {300};
    cfg.a_grid = {8.0, 2.0};
    cfg.b_grid = {0.5, 1.8};
    cfg.trials = 50;
  } else if (inv.subcommand == "mc-entrywise") {
    cfg.n_grid = {100, 400};
    cfg.r = 2;
    cfg.kappa = 2;
    cfg.p = 0.5;
    cfg.trials = 30;
  } else if (inv.subcommand == "certificates") {
    cfg.n_grid = {200};
    cfg.r = 2;
    cfg.sigma_ratio_grid = {0.01};
    cfg.kappa = 2;
    cfg.trials = 100;
  } else if (inv.subcommand == "rank1") {
    cfg.n_grid = {200};
    cfg.r = 1;
    cfg.sigma_ratio_grid = {0.01};
    cfg.kappa = 1;
    cfg.trials = 20;
  } else if (inv.subcommand == "verify") {
    cfg.n_grid = {50};
    cfg.r = 2;
    cfg.sigma_ratio_grid = {0.01};
    cfg.kappa = 2;
    cfg.trials = 1;
  }

  if (auto v = kv.get("n")) {
    cfg.n_grid.clear();
    for (double x : detail::parse_grid("n", *v)) cfg.n_grid.push_back(static_cast<Eigen::Index>(x));
  }
  if (auto v = kv.get("r")) cfg.r = static_cast<Eigen::Index>(detail::parse_number("r", *v));
  if (auto v = kv.get("sigmaratio")) cfg.sigma_ratio_grid = detail::parse_grid("sigmaratio", *v);
  if (auto v = kv.get("kappa")) cfg.kappa = detail::parse_number("kappa", *v);
  if (auto v = kv.get("mu")) cfg.mu = detail::parse_number("mu", *v);
  if (auto v = kv.get("a")) cfg.a_grid = detail::parse_grid("a", *v);
  if (auto v = kv.get("b")) cfg.b_grid = detail::parse_grid("b", *v);
  if (auto v = kv.get("p")) cfg.p = detail::parse_number("p", *v);
  if (auto v = kv.get("trials")) cfg.trials = static_cast<int>(detail::parse_number("trials", *v));
  if (auto v = kv.get("outdir")) cfg.out_dir = *v;
  if (auto v = kv.get("format")) cfg.format = *v;
  if (auto v = kv.get("jobs")) cfg.jobs = static_cast<int>(detail::parse_number("jobs", *v));

  // Seed precedence: flag, then environment, then config file, then 0.
  if (auto it = inv.overrides.find("seed"); it != inv.overrides.end()) {
    cfg.master_seed = detail::parse_seed(it->second);
  } else if (const char* env = std::getenv("SPECTRAL_PERTURB_SEED"); env != nullptr) {
    cfg.master_seed = detail::parse_seed(env);
  } else if (auto it2 = file_kv.find("seed"); it2 != file_kv.end()) {
    cfg.master_seed = detail::parse_seed(it2->second);
  } else {
    cfg.master_seed = 0;
  }

  cfg.validate();
  return cfg;
}

namespace detail {

// verify: identities plus the full certificate list on a single instance.
inline SweepOutput verify_run(const SweepConfig& cfg, std::string* cert_json) {
  const Eigen::Index n = cfg.n_grid[0];
  const Instance inst = trial_instance(n, cfg.r, cfg.mu, cfg.kappa, cfg.sigma_ratio_grid[0],
                                       cfg.family, rng::derive(cfg.master_seed, 0));
  const Estimate est = compute_estimate(inst);
  const LooEnsemble ens = build_ensemble(inst);

  std::vector<BoundCertificate> certs = lemma_certificates(inst, ens, est, cfg.constants);
  if (cfg.r == 1) {
    std::vector<BoundCertificate> r1 = rank1_chain(inst, ens, cfg.constants);
    certs.insert(certs.end(), r1.begin(), r1.end());
  }
  *cert_json = certificates_to_json(certs);

  SweepOutput out;
  out.experiment = "verify";
  out.columns = {"cert_id", "holds", "violated", "precondition_not_met", "trials"};
  bool any_violated = false;
  for (const auto& c : certs) {
    out.rows.push_back({c.id, c.status == CertStatus::Holds ? "1" : "0",
                        c.status == CertStatus::Violated ? "1" : "0",
                        c.status == CertStatus::PreconditionNotMet ? "1" : "0", "1"});
    any_violated = any_violated || c.status == CertStatus::Violated;
  }
  out.assertions.push_back({"no-violations", any_violated ? 1.0 : 0.0, 0.0, !any_violated});

  double worst = 0;
  const std::vector<IdentityResidual> ids = decomposition_identities(inst, est, cfg.r == 1 ? &ens : nullptr);
  for (const auto& idr : ids)
    if (!idr.skipped) worst = std::max(worst, idr.residual);
  out.assertions.push_back({"identity-residuals", worst, 1e-9, worst <= 1e-9});
  return out;
}

inline SweepOutput rank1_run(const SweepConfig& cfg) {
  SweepOutput out;
  out.experiment = "rank1";
  out.columns = {"cert_id", "holds", "violated", "precondition_not_met", "trials"};
  std::map<std::string, CertTally> tally;
  const Eigen::Index n = cfg.n_grid[0];
  std::vector<std::vector<BoundCertificate>> per_trial(static_cast<std::size_t>(cfg.trials));
  run_indexed(cfg.trials, cfg.jobs, [&](int t) {
    const std::uint64_t seed = rng::derive(cfg.master_seed, static_cast<std::uint64_t>(t));
    const Instance inst = trial_instance(n, 1, cfg.mu, 1.0, cfg.sigma_ratio_grid[0], cfg.family, seed);
    const LooEnsemble ens = build_ensemble(inst);
    per_trial[static_cast<std::size_t>(t)] = rank1_chain(inst, ens, cfg.constants);
  });
  for (const auto& certs : per_trial) {
    for (const auto& c : certs) {
      CertTally& ct = tally[c.id];
      ct.trials += 1;
      switch (c.status) {
        case CertStatus::Holds: ct.holds += 1; break;
        case CertStatus::Violated: ct.violated += 1; break;
        case CertStatus::PreconditionNotMet: ct.precondition_not_met += 1; break;
      }
    }
  }
  double worst_rate = 0;
  for (const auto& [id, ct] : tally) {
    out.rows.push_back({id, std::to_string(ct.holds), std::to_string(ct.violated),
                        std::to_string(ct.precondition_not_met), std::to_string(ct.trials)});
    worst_rate = std::max(worst_rate, ct.trials > 0 ? static_cast<double>(ct.violated) / static_cast<double>(ct.trials) : 0);
  }
  out.assertions.push_back({"max-violation-rate", worst_rate, cfg.constants.violation_allowance,
                            worst_rate <= cfg.constants.violation_allowance});
  return out;
}

}  // namespace detail

// Run a parsed invocation end to end: compute, write outputs, return the
// exit code (0 pass, 1 assertion failure, 3 I/O failure).
inline int run(const CliInvocation& inv) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepConfig cfg = effective_config(inv);

  std::string cert_json;
  SweepOutput out;
  if (inv.subcommand == "scaling")
    out = scaling_sweep(cfg);
  else if (inv.subcommand == "first-order")
    out = first_order_sweep(cfg);
  else if (inv.subcommand == "sbm-phase")
    out = sbm_phase_grid(cfg);
  else if (inv.subcommand == "mc-entrywise")
    out = mc_entrywise_sweep(cfg);
  else if (inv.subcommand == "certificates")
    out = certificate_sweep(cfg);
  else if (inv.subcommand == "rank1")
    out = detail::rank1_run(cfg);
  else
    out = detail::verify_run(cfg, &cert_json);

  namespace fs = std::filesystem;
  try {
    fs::create_directories(cfg.out_dir);
    const auto write_file = [&](const std::string& name, const std::string& content) {
      std::ofstream f(fs::path(cfg.out_dir) / name, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open " + name + " for writing");
      f << content;
      if (!f) throw std::runtime_error("write failure on " + name);
    };

    const std::string digest = cfg.digest();
    if (cfg.format == "json")
      write_file(out.experiment + ".json", out.records_json());
    else
      write_file(out.experiment + ".csv", out.csv());
    write_file(out.experiment + "_summary.json", out.summary_json(digest));
    if (!out.extra_name.empty()) write_file(out.extra_name, out.extra_content);
    if (!cert_json.empty()) write_file("certificates.json", cert_json);
    if (out.plot_points.size() >= 2)
      write_file(out.experiment + ".svg", render_svg(out.experiment, out.plot_points));

    const auto wall_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    std::string manifest = "{\"subcommand\": \"" + inv.subcommand + "\"";
    manifest += ", \"config_digest\": \"" + digest + "\"";
    manifest += ", \"version\": \"0.1.0\"";
    manifest += ", \"config\": {";
    bool first = true;
    std::stringstream canon(cfg.canonical());
    std::string line;
    while (std::getline(canon, line)) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      if (!first) manifest += ", ";
      first = false;
      manifest += "\"" + line.substr(0, eq) + "\": \"" + json_escape(line.substr(eq + 1)) + "\"";
    }
    manifest += "}";
    manifest += ", \"wall_time_ms\": " + std::to_string(wall_ms) + "}\n";
    write_file("run_manifest.json", manifest);
  } catch (const std::exception&) {
    return 3;
  }

  for (const auto& a : out.assertions)
    if (!a.pass) return 1;
  return 0;
}

}  // namespace specp
