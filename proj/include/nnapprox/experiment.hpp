#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "nnapprox/counterexample.hpp"
#include "nnapprox/learner.hpp"
#include "nnapprox/spaces.hpp"

namespace nnapprox {

// Malformed configuration (unknown key, missing field, wrong type).  The CLI
// maps this family to exit code 1, precondition errors to 2.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Named corpus functions:
//   "zeta:<M'>"     spike of width 1/M' (any dimension)
//   "affine:<a>,<b>" x -> a*x_1 + b
//   "sqrt"           x -> sqrt(x_1)
//   "hoelder:<beta>" x -> |2*x_1 - 1|^beta
//   "net:<file>"     realization of a serialized network (relative to base_dir)
CorpusMember make_corpus_member(const std::string& name, std::size_t d,
                                const std::filesystem::path& base_dir);

struct AuditParams {
  std::uint64_t num_nets = 1000;
  std::uint64_t pairs_per_net = 1000;
  std::size_t d = 1;
  std::uint64_t L = 4;     // depth budget for generated networks
  std::uint64_t n = 32;    // weight budget
  double C = 2.0;          // magnitude budget
  std::uint64_t seed = 0;
};

struct AuditRow {
  std::uint64_t net_index;
  double max_quotient;
  double bound;
  bool ok;
};

struct AuditResult {
  std::vector<AuditRow> rows;
  std::uint64_t violations = 0;
  double max_ratio = 0.0;  // worst quotient/bound over all networks
};

// Uniformly random network within the stated budgets: depth in [2, L],
// weight count <= n, magnitudes <= C.
Network random_sigma_network(std::mt19937_64& rng, std::size_t d, std::uint64_t L,
                             std::uint64_t n, double C);

// Samples difference quotients of random networks against the closed-form
// Lipschitz bound for their budget class.
AuditResult run_lipschitz_audit(const AuditParams& params);

struct ExperimentConfig {
  std::string command;  // gamma | verdict | counterexample | learner-rate | lipschitz-audit
  std::uint64_t seed = 0;

  std::optional<double> alpha;
  std::optional<double> p;  // IEEE infinity for the sup norm
  std::optional<std::size_t> d;
  std::optional<GrowthPair> growth;

  std::optional<double> beta;
  std::optional<double> gamma;
  std::uint64_t L = 2;
  std::vector<std::uint64_t> k_list;
  std::vector<std::uint64_t> m_list;
  std::vector<std::string> corpus;
  std::uint64_t probe_limit = 100000;
  std::optional<double> tol;
  std::optional<std::size_t> grid_points;
  std::size_t pair_budget = 4096;

  std::optional<AuditParams> audit;

  // Effective config after the seed override, hashed into report.json.
  nlohmann::json effective;
  // Resolution base for "net:<file>" corpus members.
  std::filesystem::path base_dir = ".";

  // Strict parse: every unknown key is an error.
  static ExperimentConfig parse(const nlohmann::json& j);

  SpaceParams space() const;  // throws config_error when fields are missing
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 3 when an audit-style check failed
  nlohmann::json report;
};

// Executes one command, writing report.json (plus command-specific CSV files
// and serialized networks) under out_dir.  Precondition and evaluation
// errors propagate as exceptions.
RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

// Full CLI path: reads the config file, applies the optional seed override,
// runs, and maps errors to exit codes (1 unreadable config, 2 precondition,
// 3 failed check).
int run_cli(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
            std::optional<std::uint64_t> seed_override, std::string* error_out = nullptr);

// FNV-1a over the canonical (sorted-key) dump of the effective config.
std::string config_hash(const nlohmann::json& j);

}  // namespace nnapprox
