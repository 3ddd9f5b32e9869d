#include "nnapprox/growth.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace nnapprox {

namespace {

// How far construction-time validation samples a growth function.
constexpr std::uint64_t kValidationPrefix = 64;

double power_log_raw(double theta, double kappa, std::uint64_t n) {
  const double x = static_cast<double>(n);
  return std::pow(x, theta) * std::pow(std::log(2.0 * x), kappa);
}

}  // namespace

GrowthFn GrowthFn::constant(double v) {
  if (!(v >= 0.0) || !std::isfinite(v))
    throw precondition_error("GrowthFn::constant: value must be finite and >= 0");
  GrowthFn g;
  g.kind_ = GrowthKind::constant;
  g.a_ = v;
  return g;
}

GrowthFn GrowthFn::power_log(double theta, double kappa) {
  if (!(theta >= 0.0) || !std::isfinite(theta) || !std::isfinite(kappa))
    throw precondition_error("GrowthFn::power_log: theta must be finite and >= 0, kappa finite");
  GrowthFn g;
  g.kind_ = GrowthKind::power_log;
  g.a_ = theta;
  g.b_ = kappa;
  return g;
}

GrowthFn GrowthFn::table(std::vector<double> prefix) {
  if (prefix.empty()) throw precondition_error("GrowthFn::table: empty prefix");
  const double ext = prefix.back();
  return table(std::move(prefix), ext);
}

GrowthFn GrowthFn::table(std::vector<double> prefix, double extension) {
  if (prefix.empty()) throw precondition_error("GrowthFn::table: empty prefix");
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (!std::isfinite(prefix[i]) || prefix[i] < 0.0)
      throw precondition_error("GrowthFn::table: prefix values must be finite and >= 0");
    if (i > 0 && prefix[i] < prefix[i - 1])
      throw precondition_error("GrowthFn::table: prefix must be non-decreasing");
  }
  if (!std::isfinite(extension) || extension < prefix.back())
    throw precondition_error("GrowthFn::table: extension must be finite and >= last prefix value");
  GrowthFn g;
  g.kind_ = GrowthKind::table;
  g.prefix_ = std::move(prefix);
  g.b_ = extension;
  return g;
}

GrowthFn GrowthFn::infinite() {
  GrowthFn g;
  g.kind_ = GrowthKind::infinite;
  return g;
}

ExtReal GrowthFn::operator()(std::uint64_t n) const {
  if (n == 0) throw precondition_error("GrowthFn: argument must be >= 1");
  switch (kind_) {
    case GrowthKind::constant:
      return ExtReal(a_);
    case GrowthKind::power_log: {
      const double raw = power_log_raw(a_, b_, n);
      return ext_from_computed(std::ceil(raw));
    }
    case GrowthKind::table:
      return n <= prefix_.size() ? ExtReal(prefix_[n - 1]) : ExtReal(b_);
    case GrowthKind::infinite:
      return ExtReal::infinity();
  }
  throw precondition_error("GrowthFn: corrupt kind");
}

double GrowthFn::constant_value() const {
  if (kind_ != GrowthKind::constant) throw precondition_error("GrowthFn: not a constant");
  return a_;
}
double GrowthFn::theta() const {
  if (kind_ != GrowthKind::power_log) throw precondition_error("GrowthFn: not a power_log");
  return a_;
}
double GrowthFn::kappa() const {
  if (kind_ != GrowthKind::power_log) throw precondition_error("GrowthFn: not a power_log");
  return b_;
}
const std::vector<double>& GrowthFn::prefix() const {
  if (kind_ != GrowthKind::table) throw precondition_error("GrowthFn: not a table");
  return prefix_;
}
double GrowthFn::extension() const {
  if (kind_ != GrowthKind::table) throw precondition_error("GrowthFn: not a table");
  return b_;
}

nlohmann::json GrowthFn::to_json() const {
  switch (kind_) {
    case GrowthKind::constant:
      return {{"kind", "constant"}, {"value", a_}};
    case GrowthKind::power_log:
      return {{"kind", "powerlog"}, {"theta", a_}, {"kappa", b_}};
    case GrowthKind::table:
      return {{"kind", "table"}, {"prefix", prefix_}, {"extension", b_}};
    case GrowthKind::infinite:
      return {{"kind", "infinite"}};
  }
  throw precondition_error("GrowthFn: corrupt kind");
}

GrowthFn GrowthFn::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw precondition_error("GrowthFn: JSON must be an object with a string 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  auto expect_keys = [&](std::initializer_list<const char*> keys) {
    for (const auto& [key, value] : j.items()) {
      (void)value;
      if (key == "kind") continue;
      if (std::find_if(keys.begin(), keys.end(),
                       [&](const char* k) { return key == k; }) == keys.end())
        throw precondition_error("GrowthFn: unknown key '" + key + "' for kind '" + kind + "'");
    }
    for (const char* k : keys)
      if (k != std::string("extension") && !j.contains(k))
        throw precondition_error("GrowthFn: missing key '" + std::string(k) + "'");
  };
  if (kind == "constant") {
    expect_keys({"value"});
    return constant(j.at("value").get<double>());
  }
  if (kind == "powerlog") {
    expect_keys({"theta", "kappa"});
    return power_log(j.at("theta").get<double>(), j.at("kappa").get<double>());
  }
  if (kind == "table") {
    expect_keys({"prefix", "extension"});
    auto prefix = j.at("prefix").get<std::vector<double>>();
    if (j.contains("extension")) return table(std::move(prefix), j.at("extension").get<double>());
    return table(std::move(prefix));
  }
  if (kind == "infinite") {
    expect_keys({});
    return infinite();
  }
  throw precondition_error("GrowthFn: unknown kind '" + kind + "'");
}

GrowthPair::GrowthPair(GrowthFn depth_fn, GrowthFn coeff_fn)
    : depth(std::move(depth_fn)), coeff(std::move(coeff_fn)) {
  ExtReal prev_depth(0.0), prev_coeff(0.0);
  for (std::uint64_t n = 1; n <= kValidationPrefix; ++n) {
    const ExtReal dn = depth(n);
    if (dn.is_finite() && dn.finite_value() < 2.0)
      throw precondition_error("GrowthPair: depth must be >= 2 (violated at n=" + std::to_string(n) + ")");
    const ExtReal cn = coeff(n);
    // Ceiling rounding makes power_log non-monotone for a few small n when
    // kappa < 0; the asymptotic family is still admissible, so only the data
    // driven kinds are held to sampled monotonicity here.
    if (depth.kind() != GrowthKind::power_log && dn < prev_depth)
      throw precondition_error("GrowthPair: depth must be non-decreasing");
    if (coeff.kind() != GrowthKind::power_log && cn < prev_coeff)
      throw precondition_error("GrowthPair: coefficient must be non-decreasing");
    prev_depth = dn;
    prev_coeff = cn;
  }
}

nlohmann::json GrowthPair::to_json() const {
  return {{"depth", depth.to_json()}, {"coeff", coeff.to_json()}};
}

GrowthPair GrowthPair::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("depth") || !j.contains("coeff"))
    throw precondition_error("GrowthPair: JSON must contain 'depth' and 'coeff'");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "depth" && key != "coeff")
      throw precondition_error("GrowthPair: unknown key '" + key + "'");
  }
  return GrowthPair(GrowthFn::from_json(j.at("depth")), GrowthFn::from_json(j.at("coeff")));
}

ExtReal ell_star(const GrowthPair& g) {
  switch (g.depth.kind()) {
    case GrowthKind::constant:
      return ExtReal(g.depth.constant_value());
    case GrowthKind::table:
      // Non-decreasing with constant extension: the supremum is the extension.
      return ExtReal(g.depth.extension());
    case GrowthKind::power_log:
    case GrowthKind::infinite:
      return ExtReal::infinity();
  }
  throw precondition_error("ell_star: corrupt kind");
}

namespace {

// gamma for a parametric coefficient and finite ell_star: theta-slope times
// the deepest admissible L plus the floor(L/2) width factor, maximised at
// L = ell_star because both terms are non-decreasing in L.
ExtReal parametric_gamma(const GrowthFn& coeff, std::uint64_t ls) {
  double theta = 0.0;
  if (coeff.kind() == GrowthKind::power_log) {
    theta = coeff.theta();
  } else {
    // constant coefficient: zero constant kills every product term.
    if (coeff.constant_value() == 0.0) return ExtReal(0.0);
  }
  return ExtReal(theta * static_cast<double>(ls) + static_cast<double>(ls / 2));
}

struct ProbeSamples {
  std::vector<double> log_n;
  std::vector<double> log_ln2n;
  std::vector<double> log_c;        // log of coeff at every probed n
  std::vector<std::size_t> trans;   // indices where c steps up (last n of a run)
};

ProbeSamples probe_coeff(const GrowthFn& coeff, std::uint64_t probe_limit) {
  ProbeSamples s;
  const std::uint64_t lo = std::max<std::uint64_t>(2, probe_limit / 2);
  s.log_n.reserve(probe_limit - lo + 1);
  s.log_c.reserve(probe_limit - lo + 1);
  for (std::uint64_t n = lo; n <= probe_limit; ++n) {
    const ExtReal c = coeff(n);
    if (c.is_infinite()) throw evaluation_error("gamma estimate: coefficient infinite on probe window");
    const double v = c.finite_value();
    if (v <= 0.0) continue;  // zero rows carry no slope information
    const double x = static_cast<double>(n);
    s.log_n.push_back(std::log(x));
    s.log_ln2n.push_back(std::log(std::log(2.0 * x)));
    s.log_c.push_back(std::log(v));
  }
  for (std::size_t i = 0; i + 1 < s.log_c.size(); ++i)
    if (s.log_c[i] < s.log_c[i + 1]) s.trans.push_back(i);
  return s;
}

// Power-law slope of an integer-valued growth function.  Plateaus between
// ceiling steps bias a raw log-log fit, so only the step locations enter the
// regression, and a ln(ln 2n) regressor absorbs logarithmic factors that
// would otherwise tilt the slope.
double fitted_theta(const ProbeSamples& s) {
  if (s.trans.size() < 4) return 0.0;  // flat on the window
  double ata[3][3] = {};
  double atb[3] = {};
  for (std::size_t idx : s.trans) {
    const double row[3] = {1.0, s.log_n[idx], s.log_ln2n[idx]};
    const double y = s.log_c[idx];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) ata[i][j] += row[i] * row[j];
      atb[i] += row[i] * y;
    }
  }
  // Gaussian elimination with partial pivoting on the 3x3 normal system; a
  // tiny pivot means the regressors are degenerate on this window, which only
  // happens when the data is flat.
  double a[3][4];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a[i][j] = ata[i][j];
    a[i][3] = atb[i];
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (std::fabs(a[piv][col]) < 1e-12) return 0.0;
    std::swap(a[col], a[piv]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (int j = col; j < 4; ++j) a[r][j] -= f * a[col][j];
    }
  }
  const double theta = a[1][3] / a[1][1];
  return std::max(0.0, theta);
}

}  // namespace

GammaEstimate numeric_gamma_star_estimate(const GrowthPair& g, std::uint64_t probe_limit) {
  if (probe_limit < 16) throw precondition_error("gamma estimate: probe_limit must be >= 16");
  const ExtReal ls = ell_star(g);
  if (ls.is_infinite()) return {ExtReal::infinity(), false};
  const std::uint64_t L_max = static_cast<std::uint64_t>(ls.finite_value());
  const double theta = fitted_theta(probe_coeff(g.coeff, probe_limit));
  double best = 0.0;
  for (std::uint64_t L = 1; L <= L_max; ++L)
    best = std::max(best, theta * static_cast<double>(L) + static_cast<double>(L / 2));
  return {ExtReal(best), true};
}

GammaEstimate gamma_star(const GrowthPair& g, std::uint64_t probe_limit) {
  const ExtReal ls = ell_star(g);
  if (ls.is_infinite()) return {ExtReal::infinity(), false};
  if (g.coeff.kind() == GrowthKind::infinite) return {ExtReal::infinity(), false};
  if (g.coeff.parametric()) {
    return {parametric_gamma(g.coeff, static_cast<std::uint64_t>(ls.finite_value())), false};
  }
  return numeric_gamma_star_estimate(g, probe_limit);
}

namespace {

// Smallest gamma for which c(n)^L n^(floor(L/2)) / n^gamma has stopped
// growing on the probed prefix: the max over the upper half of the window
// must not exceed the max over the lower half.  Monotone in gamma, so a
// bisection to fine resolution replaces a fixed grid scan.
double table_gamma_diamond(const GrowthFn& coeff, std::uint64_t L_max, std::uint64_t probe_limit) {
  std::vector<double> log_n, log_c;
  log_n.reserve(probe_limit);
  log_c.reserve(probe_limit);
  for (std::uint64_t n = 1; n <= probe_limit; ++n) {
    const ExtReal c = coeff(n);
    if (c.is_infinite()) throw evaluation_error("gamma_diamond: coefficient infinite on probe window");
    log_n.push_back(std::log(static_cast<double>(n)));
    log_c.push_back(c.finite_value() > 0.0 ? std::log(c.finite_value())
                                           : -std::numeric_limits<double>::infinity());
  }
  const std::size_t split = log_n.size() / 2;
  double worst = 0.0;
  for (std::uint64_t L = 1; L <= L_max; ++L) {
    auto still_growing = [&](double gamma) {
      double head = -std::numeric_limits<double>::infinity();
      double tail = head;
      for (std::size_t i = 0; i < log_n.size(); ++i) {
        const double y = static_cast<double>(L) * log_c[i] +
                         (static_cast<double>(L / 2) - gamma) * log_n[i];
        double& half = i < split ? head : tail;
        half = std::max(half, y);
      }
      return tail > head + 1e-9;
    };
    double lo = 0.0, hi = 1.0;
    while (still_growing(hi)) {
      hi *= 2.0;
      if (hi > 1e6) throw evaluation_error("gamma_diamond: no finite exponent bounds the probe window");
    }
    for (int it = 0; it < 60 && hi - lo > 1e-6; ++it) {
      const double mid = 0.5 * (lo + hi);
      (still_growing(mid) ? lo : hi) = mid;
    }
    worst = std::max(worst, hi);
  }
  return worst;
}

}  // namespace

GammaEstimate gamma_diamond(const GrowthPair& g, std::uint64_t probe_limit) {
  const ExtReal ls = ell_star(g);
  if (ls.is_infinite()) return {ExtReal::infinity(), false};
  if (g.coeff.kind() == GrowthKind::infinite) return {ExtReal::infinity(), false};
  const std::uint64_t L_max = static_cast<std::uint64_t>(ls.finite_value());
  if (g.coeff.parametric()) {
    // Coincides with gamma_star on closed-form families.
    return {parametric_gamma(g.coeff, L_max), false};
  }
  if (probe_limit < 16) throw precondition_error("gamma_diamond: probe_limit must be >= 16");
  return {ExtReal(table_gamma_diamond(g.coeff, L_max, probe_limit)), true};
}

}  // namespace nnapprox
