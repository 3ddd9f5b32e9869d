#include "nnapprox/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "nnapprox/analysis.hpp"

namespace nnapprox {

namespace fs = std::filesystem;

namespace {

constexpr const char* kToolkitVersion = "0.1.0";

nlohmann::json versions_block() {
  return {{"toolkit", kToolkitVersion},
          {"modules",
           {{"relu_net", 1},
            {"growth", 1},
            {"spaces", 1},
            {"analysis", 1},
            {"counterexample", 1},
            {"learner", 1},
            {"cli", 1}}}};
}

// Shortest round-trip decimal form; deterministic across runs.
std::string fmt(double v) { return nlohmann::json(v).dump(); }

nlohmann::json ext_json(const ExtReal& v) {
  if (v.is_infinite()) return "inf";
  return v.finite_value();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw evaluation_error("cannot open output file " + path.string());
  out << text;
}

// Least squares slope of log y against log x; nullopt when the fit is not
// meaningful (fewer than 3 usable points or a non-positive value).
std::optional<double> log_slope(const std::vector<std::pair<double, double>>& samples) {
  std::vector<std::pair<double, double>> usable;
  for (const auto& [x, y] : samples)
    if (x > 0.0 && y > 0.0) usable.emplace_back(std::log(x), std::log(y));
  if (usable.size() < 3) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : usable) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(usable.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / denom;
}

// Standard CSV escaping; only needed for fields that may hold commas.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

double parse_double_token(const std::string& tok, const std::string& name) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw precondition_error("corpus member '" + name + "': bad numeric parameter '" + tok + "'");
  }
}

}  // namespace

CorpusMember make_corpus_member(const std::string& name, std::size_t d,
                                const fs::path& base_dir) {
  if (d == 0) throw precondition_error("corpus member: dimension must be >= 1");
  const auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : name.substr(colon + 1);

  if (head == "zeta") {
    const double m_prime = parse_double_token(args, name);
    const ZetaParams z(m_prime, d);
    return {name, [z](std::span<const double> x) { return zeta_eval(z, x); }};
  }
  if (head == "affine") {
    const auto comma = args.find(',');
    if (comma == std::string::npos)
      throw precondition_error("corpus member '" + name + "': expected affine:<a>,<b>");
    const double a = parse_double_token(args.substr(0, comma), name);
    const double b = parse_double_token(args.substr(comma + 1), name);
    return {name, [a, b](std::span<const double> x) { return a * x[0] + b; }};
  }
  if (head == "sqrt") {
    if (!args.empty()) throw precondition_error("corpus member 'sqrt' takes no parameters");
    return {name, [](std::span<const double> x) { return std::sqrt(x[0]); }};
  }
  if (head == "hoelder") {
    const double beta = parse_double_token(args, name);
    if (!(beta > 0.0) || beta > 1.0)
      throw precondition_error("corpus member '" + name + "': exponent must lie in (0, 1]");
    return {name,
            [beta](std::span<const double> x) { return std::pow(std::fabs(2.0 * x[0] - 1.0), beta); }};
  }
  if (head == "net") {
    const fs::path file = base_dir / args;
    std::ifstream in(file);
    if (!in) throw precondition_error("corpus member '" + name + "': cannot open " + file.string());
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw precondition_error("corpus member '" + name + "': bad JSON: " + e.what());
    }
    auto net = std::make_shared<Network>(Network::from_json(j));
    if (net->input_dim() != d || net->output_dim() != 1)
      throw precondition_error("corpus member '" + name + "': network shape does not match");
    return {name, [net](std::span<const double> x) { return net->realize(x)[0]; }};
  }
  throw precondition_error("unknown corpus member '" + name + "'");
}

Network random_sigma_network(std::mt19937_64& rng, std::size_t d, std::uint64_t L,
                             std::uint64_t n, double C) {
  if (L < 2) throw precondition_error("random_sigma_network: depth budget must be >= 2");
  if (n == 0) throw precondition_error("random_sigma_network: weight budget must be >= 1");
  if (!(C > 0.0)) throw precondition_error("random_sigma_network: magnitude must be > 0");
  const std::uint64_t depth = 2 + rng() % (L - 1);
  std::vector<std::size_t> widths(depth + 1);
  widths[0] = d;
  widths[depth] = 1;
  for (std::uint64_t l = 1; l < depth; ++l) widths[l] = 1 + rng() % 6;

  std::vector<Layer> layers(depth);
  for (std::uint64_t l = 0; l < depth; ++l) {
    layers[l].rows = widths[l + 1];
    layers[l].cols = widths[l];
    layers[l].bias.assign(widths[l + 1], 0.0);
  }
  std::uniform_real_distribution<double> val(-C, C);
  std::set<std::tuple<std::uint64_t, std::size_t, std::size_t>> used_entries;
  std::set<std::pair<std::uint64_t, std::size_t>> used_biases;
  const std::uint64_t target = 1 + rng() % n;
  std::uint64_t placed = 0;
  for (std::uint64_t attempt = 0; attempt < 4 * target && placed < target; ++attempt) {
    const std::uint64_t l = rng() % depth;
    const std::size_t row = rng() % layers[l].rows;
    double v = 0.0;
    while (v == 0.0) v = val(rng);
    if (rng() % 5 == 0) {
      if (!used_biases.insert({l, row}).second) continue;
      layers[l].bias[row] = v;
    } else {
      const std::size_t col = rng() % layers[l].cols;
      if (!used_entries.insert({l, row, col}).second) continue;
      layers[l].entries.push_back({row, col, v});
    }
    ++placed;
  }
  return Network(std::move(layers));
}

AuditResult run_lipschitz_audit(const AuditParams& params) {
  if (params.num_nets == 0 || params.pairs_per_net == 0)
    throw precondition_error("lipschitz audit: counts must be >= 1");
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const ExtReal bound = lipschitz_bound(params.d, params.C, params.L, params.n);
  AuditResult result;
  std::vector<double> x(params.d), y(params.d);
  for (std::uint64_t i = 0; i < params.num_nets; ++i) {
    const Network net = random_sigma_network(rng, params.d, params.L, params.n, params.C);
    double worst = 0.0;
    for (std::uint64_t pair = 0; pair < params.pairs_per_net; ++pair) {
      for (std::size_t a = 0; a < params.d; ++a) {
        x[a] = unif(rng);
        y[a] = unif(rng);
      }
      double dist2 = 0.0;
      for (std::size_t a = 0; a < params.d; ++a) dist2 += (x[a] - y[a]) * (x[a] - y[a]);
      if (dist2 == 0.0) continue;
      const double q = std::fabs(net.realize(x)[0] - net.realize(y)[0]) / std::sqrt(dist2);
      worst = std::max(worst, q);
    }
    const bool ok = bound.is_infinite() || worst <= bound.as_double();
    if (!ok) ++result.violations;
    if (bound.is_finite() && bound.as_double() > 0.0)
      result.max_ratio = std::max(result.max_ratio, worst / bound.as_double());
    result.rows.push_back({i, worst, bound.as_double(), ok});
  }
  return result;
}

namespace {

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return key == k; }) == allowed.end())
      throw config_error("config: unknown key '" + key + "' in " + where);
  }
}

double parse_p(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw config_error("config: p must be a positive number or \"inf\"");
  }
  const double p = j.get<double>();
  if (!(p > 0.0)) throw config_error("config: p must be a positive number or \"inf\"");
  return p;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw config_error("config: top level must be an object");
    reject_unknown(j, {"command", "seed", "space", "growth", "knobs", "audit"}, "top level");
    ExperimentConfig cfg;
    if (!j.contains("command")) throw config_error("config: missing 'command'");
    cfg.command = j.at("command").get<std::string>();
    const std::set<std::string> known = {"gamma", "verdict", "counterexample", "learner-rate",
                                         "lipschitz-audit"};
    if (!known.count(cfg.command)) throw config_error("config: unknown command '" + cfg.command + "'");
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();

    if (j.contains("space")) {
      const nlohmann::json& s = j.at("space");
      reject_unknown(s, {"alpha", "p", "d"}, "space");
      if (s.contains("alpha")) cfg.alpha = s.at("alpha").get<double>();
      if (s.contains("p")) cfg.p = parse_p(s.at("p"));
      if (s.contains("d")) cfg.d = s.at("d").get<std::size_t>();
    }
    if (j.contains("growth")) {
      try {
        cfg.growth = GrowthPair::from_json(j.at("growth"));
      } catch (const precondition_error& e) {
        throw config_error(std::string("config: bad growth pair: ") + e.what());
      }
    }
    if (j.contains("knobs")) {
      const nlohmann::json& k = j.at("knobs");
      reject_unknown(k,
                     {"beta", "gamma", "L", "k_list", "m_list", "corpus", "probe_limit", "tol",
                      "grid_points", "pair_budget"},
                     "knobs");
      if (k.contains("beta")) cfg.beta = k.at("beta").get<double>();
      if (k.contains("gamma")) cfg.gamma = k.at("gamma").get<double>();
      if (k.contains("L")) cfg.L = k.at("L").get<std::uint64_t>();
      if (k.contains("k_list")) cfg.k_list = k.at("k_list").get<std::vector<std::uint64_t>>();
      if (k.contains("m_list")) cfg.m_list = k.at("m_list").get<std::vector<std::uint64_t>>();
      if (k.contains("corpus")) cfg.corpus = k.at("corpus").get<std::vector<std::string>>();
      if (k.contains("probe_limit")) cfg.probe_limit = k.at("probe_limit").get<std::uint64_t>();
      if (k.contains("tol")) cfg.tol = k.at("tol").get<double>();
      if (k.contains("grid_points")) cfg.grid_points = k.at("grid_points").get<std::size_t>();
      if (k.contains("pair_budget")) cfg.pair_budget = k.at("pair_budget").get<std::size_t>();
    }
    if (j.contains("audit")) {
      const nlohmann::json& a = j.at("audit");
      reject_unknown(a, {"nets", "pairs", "d", "L", "n", "C"}, "audit");
      AuditParams ap;
      if (a.contains("nets")) ap.num_nets = a.at("nets").get<std::uint64_t>();
      if (a.contains("pairs")) ap.pairs_per_net = a.at("pairs").get<std::uint64_t>();
      if (a.contains("d")) ap.d = a.at("d").get<std::size_t>();
      if (a.contains("L")) ap.L = a.at("L").get<std::uint64_t>();
      if (a.contains("n")) ap.n = a.at("n").get<std::uint64_t>();
      if (a.contains("C")) ap.C = a.at("C").get<double>();
      cfg.audit = ap;
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config: ") + e.what());
  }
}

SpaceParams ExperimentConfig::space() const {
  if (!alpha || !p || !d || !growth)
    throw config_error("config: command '" + command +
                       "' requires space.alpha, space.p, space.d and a growth pair");
  return SpaceParams{*alpha, *p, *d, *growth};
}

std::string config_hash(const nlohmann::json& j) {
  const std::string dump = j.dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV offset basis
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;  // FNV prime
  }
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

nlohmann::json gamma_estimate_json(const GammaEstimate& g) {
  return {{"value", ext_json(g.value)}, {"estimate", g.is_estimate}};
}

RunResult run_gamma(const ExperimentConfig& cfg) {
  if (!cfg.growth) throw config_error("config: gamma command requires a growth pair");
  RunResult r;
  r.report["result"] = {{"ell_star", ext_json(ell_star(*cfg.growth))},
                        {"gamma_star", gamma_estimate_json(gamma_star(*cfg.growth, cfg.probe_limit))},
                        {"gamma_diamond",
                         gamma_estimate_json(gamma_diamond(*cfg.growth, cfg.probe_limit))}};
  return r;
}

RunResult run_verdict(const ExperimentConfig& cfg) {
  const SpaceParams params = cfg.space();
  const GammaEstimate g = gamma_star(params.growth, cfg.probe_limit);
  const double tol = cfg.tol ? *cfg.tol : (g.is_estimate ? 0.05 : 1e-9);
  RunResult r;
  nlohmann::json& res = r.report["result"];
  res["gamma_star"] = gamma_estimate_json(g);
  res["tol"] = tol;
  res["continuous"] = embedding_verdict_C(params, g, tol).to_json();
  if (cfg.beta) res["hoelder"] = embedding_verdict_hoelder(params, *cfg.beta, g, tol).to_json();
  res["optimal_sampling_rate"] =
      optimal_sampling_rate(params.alpha, params.d, g.value, ell_star(params.growth));
  if (cfg.gamma) res["secondary_mu"] = secondary_embedding_exponent(params, *cfg.gamma);
  return r;
}

RunResult run_counterexample(const ExperimentConfig& cfg, const fs::path& out_dir) {
  const SpaceParams params = cfg.space();
  if (!cfg.gamma) throw config_error("config: counterexample command requires knobs.gamma");
  if (cfg.k_list.empty()) throw config_error("config: counterexample command requires knobs.k_list");
  const bool hoelder_mode = cfg.beta.has_value();
  const SequenceResult seq =
      hoelder_mode
          ? necessary_hoelder_sequence(params, *cfg.beta, *cfg.gamma, cfg.L, cfg.k_list)
          : necessary_C_sequence(params, *cfg.gamma, cfg.L, cfg.k_list);

  GridSpec grid = cfg.grid_points
                      ? GridSpec{params.d, *cfg.grid_points, GridPlacement::lattice}
                      : GridSpec::default_for(params.d, GridPlacement::lattice);

  fs::create_directories(out_dir / "networks");
  std::ostringstream csv;
  csv << "k,n_k,M,M_prime,sup_norm,lip_beta,certificate_pass\n";

  nlohmann::json instances = nlohmann::json::array();
  std::vector<std::pair<double, double>> sup_samples, lip_samples;
  bool all_certified = true;
  for (const CounterexampleInstance& inst : seq.instances) {
    const Network& net = inst.net;
    RealFn f = [&net](std::span<const double> x) { return net.realize(x)[0]; };
    const double sup = sup_norm(f, grid);
    double lip_b = std::numeric_limits<double>::quiet_NaN();
    if (hoelder_mode)
      lip_b = lip_beta_estimate(f, *cfg.beta, grid, cfg.pair_budget, cfg.seed ^ inst.k_index).value;
    const CertificateReport cert = certify_unit_ball(inst);
    all_certified = all_certified && cert.all_ok();

    sup_samples.emplace_back(static_cast<double>(inst.n_k), sup);
    if (hoelder_mode) lip_samples.emplace_back(static_cast<double>(inst.n_k), lip_b);

    csv << inst.k_index << ',' << inst.n_k << ',' << fmt(inst.M) << ',' << fmt(inst.M_prime)
        << ',' << fmt(sup) << ',' << (hoelder_mode ? fmt(lip_b) : "na") << ','
        << (cert.all_ok() ? "true" : "false") << '\n';

    const std::string net_name = "instance_" + std::to_string(inst.k_index) + ".json";
    write_text(out_dir / "networks" / net_name, inst.net.to_json().dump(2) + "\n");

    nlohmann::json ji{{"k", inst.k_index},
                      {"n_k", inst.n_k},
                      {"L", inst.L},
                      {"C", inst.C},
                      {"M", inst.M},
                      {"M_prime", inst.M_prime},
                      {"scale", inst.scale},
                      {"sup_norm", sup},
                      {"network_file", "networks/" + net_name},
                      {"certificate",
                       {{"budget", cert.budget},
                        {"membership", cert.membership_ok},
                        {"chain_value", cert.chain_value},
                        {"chain_ok", cert.chain_ok},
                        {"lp_value", cert.lp_value},
                        {"lp_target", cert.lp_target},
                        {"lp_ok", cert.lp_ok},
                        {"pass", cert.all_ok()}}}};
    if (hoelder_mode) ji["lip_beta"] = lip_b;
    instances.push_back(std::move(ji));
  }
  write_text(out_dir / "instances.csv", csv.str());

  nlohmann::json skipped = nlohmann::json::array();
  for (const SkippedInstance& s : seq.skipped)
    skipped.push_back({{"k", s.k_index}, {"reason", s.reason}});

  const ConstructionParams cons =
      seq.instances.empty() ? ConstructionParams{} : seq.instances.front().construction;
  RunResult r;
  nlohmann::json& res = r.report["result"];
  res["mode"] = hoelder_mode ? "hoelder" : "continuous";
  res["construction"] = {{"gamma", cons.gamma},         {"theta", cons.theta},
                         {"beta_exp", cons.beta_exp},   {"delta1", cons.delta1},
                         {"delta2", cons.delta2},       {"tau", cons.tau},
                         {"kappa_scale", cons.kappa_scale}};
  res["instances"] = std::move(instances);
  res["skipped"] = std::move(skipped);
  res["certificates_pass"] = all_certified;
  if (auto s = log_slope(sup_samples)) res["sup_growth_exponent"] = *s;
  if (auto s = log_slope(lip_samples)) res["lip_growth_exponent"] = *s;

  r.exit_code = (!all_certified || seq.instances.empty()) ? 3 : 0;
  return r;
}

RunResult run_learner_rate(const ExperimentConfig& cfg, const fs::path& out_dir,
                           const fs::path& base_dir) {
  const SpaceParams params = cfg.space();
  if (cfg.m_list.empty()) throw config_error("config: learner-rate command requires knobs.m_list");
  if (cfg.corpus.empty()) throw config_error("config: learner-rate command requires knobs.corpus");
  std::vector<CorpusMember> members;
  for (const std::string& name : cfg.corpus)
    members.push_back(make_corpus_member(name, params.d, base_dir));

  const OptimalityReport rep = optimality_report(params, members, cfg.m_list, cfg.probe_limit);

  std::ostringstream csv;
  csv << "function,m,cells_per_axis,sup_error\n";
  for (const auto& row : rep.rows)
    csv << csv_field(row.id) << ',' << row.m << ',' << row.cells_per_axis << ','
        << fmt(row.sup_error) << '\n';
  write_text(out_dir / "errors.csv", csv.str());

  nlohmann::json per_budget = nlohmann::json::array();
  for (std::size_t i = 0; i < rep.m_used.size(); ++i)
    per_budget.push_back({{"m", rep.m_used[i]}, {"worst_error", rep.worst_errors[i]}});

  RunResult r;
  nlohmann::json& res = r.report["result"];
  res["fitted_exponent"] = rep.fit.degenerate ? nlohmann::json("inf") : nlohmann::json(rep.fit.exponent);
  res["predicted_rate"] = rep.predicted_rate;
  res["degenerate"] = rep.fit.degenerate;
  res["pass"] = rep.pass;
  res["per_budget"] = std::move(per_budget);
  r.exit_code = rep.pass ? 0 : 3;
  return r;
}

RunResult run_audit(const ExperimentConfig& cfg, const fs::path& out_dir) {
  AuditParams params = cfg.audit.value_or(AuditParams{});
  params.seed = cfg.seed;
  const AuditResult audit = run_lipschitz_audit(params);

  std::ostringstream csv;
  csv << "net_index,max_quotient,bound,ok\n";
  for (const AuditRow& row : audit.rows)
    csv << row.net_index << ',' << fmt(row.max_quotient) << ',' << fmt(row.bound) << ','
        << (row.ok ? "true" : "false") << '\n';
  write_text(out_dir / "audit.csv", csv.str());

  RunResult r;
  r.report["result"] = {{"nets", params.num_nets},
                        {"pairs_per_net", params.pairs_per_net},
                        {"bound", lipschitz_bound(params.d, params.C, params.L, params.n).as_double()},
                        {"violations", audit.violations},
                        {"max_ratio", audit.max_ratio},
                        {"pass", audit.violations == 0}};
  r.exit_code = audit.violations == 0 ? 0 : 3;
  return r;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  RunResult r;
  if (cfg.command == "gamma")
    r = run_gamma(cfg);
  else if (cfg.command == "verdict")
    r = run_verdict(cfg);
  else if (cfg.command == "counterexample")
    r = run_counterexample(cfg, out_dir);
  else if (cfg.command == "learner-rate")
    r = run_learner_rate(cfg, out_dir, cfg.base_dir);
  else if (cfg.command == "lipschitz-audit")
    r = run_audit(cfg, out_dir);
  else
    throw config_error("config: unknown command '" + cfg.command + "'");

  r.report["command"] = cfg.command;
  r.report["seed"] = cfg.seed;
  r.report["config_hash"] = config_hash(cfg.effective);
  r.report["versions"] = versions_block();
  write_text(out_dir / "report.json", r.report.dump(2) + "\n");
  return r;
}

int run_cli(const fs::path& config_path, const fs::path& out_dir,
            std::optional<std::uint64_t> seed_override, std::string* error_out) {
  auto fail = [&](int code, const std::string& msg) {
    if (error_out) *error_out = msg;
    return code;
  };
  nlohmann::json j;
  {
    std::ifstream in(config_path);
    if (!in) return fail(1, "cannot open config file " + config_path.string());
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      return fail(1, std::string("config is not valid JSON: ") + e.what());
    }
  }
  try {
    ExperimentConfig cfg = ExperimentConfig::parse(j);
    if (seed_override) {
      cfg.seed = *seed_override;
      j["seed"] = *seed_override;
    }
    cfg.effective = j;
    cfg.base_dir = config_path.has_parent_path() ? config_path.parent_path() : fs::path(".");
    const RunResult r = run_experiment(cfg, out_dir);
    return r.exit_code;
  } catch (const config_error& e) {
    return fail(1, e.what());
  } catch (const std::exception& e) {
    return fail(2, e.what());
  }
}

}  // namespace nnapprox
