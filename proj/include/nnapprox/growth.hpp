#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "nnapprox/ext_real.hpp"

namespace nnapprox {

enum class GrowthKind { constant, power_log, table, infinite };

// Non-decreasing map n >= 1 -> value in [0, inf].  Four families:
//   constant(v)          : n -> v
//   power_log(theta,kap) : n -> ceil(n^theta * ln(2n)^kappa), theta >= 0
//   table(prefix, ext)   : explicit prefix, constant extension beyond it
//   infinite()           : n -> inf
class GrowthFn {
 public:
  static GrowthFn constant(double v);
  static GrowthFn power_log(double theta, double kappa);
  // extension defaults to the last prefix value; must be >= it.
  static GrowthFn table(std::vector<double> prefix);
  static GrowthFn table(std::vector<double> prefix, double extension);
  static GrowthFn infinite();

  ExtReal operator()(std::uint64_t n) const;

  GrowthKind kind() const { return kind_; }
  // Closed-form families; table values come from data, so quantities derived
  // from a table coefficient are estimates.
  bool parametric() const { return kind_ != GrowthKind::table; }

  double constant_value() const;  // kind constant only
  double theta() const;           // kind power_log only
  double kappa() const;           // kind power_log only
  const std::vector<double>& prefix() const;  // kind table only
  double extension() const;                   // kind table only

  nlohmann::json to_json() const;
  static GrowthFn from_json(const nlohmann::json& j);

 private:
  GrowthFn() = default;
  GrowthKind kind_ = GrowthKind::constant;
  double a_ = 0.0;                // constant value / theta
  double b_ = 0.0;                // kappa / extension
  std::vector<double> prefix_;    // table only
};

// Depth and coefficient budgets (ell, c).  Construction validates that the
// depth takes values >= 2 on a sampled prefix and, for non-parametric
// families, that values are non-decreasing there.
struct GrowthPair {
  GrowthPair(GrowthFn depth_fn, GrowthFn coeff_fn);
  GrowthFn depth;
  GrowthFn coeff;

  nlohmann::json to_json() const;
  static GrowthPair from_json(const nlohmann::json& j);
};

// sup_n ell(n): exact for constant/table/infinite depth; power_log depth is
// treated as unbounded.
ExtReal ell_star(const GrowthPair& g);

struct GammaEstimate {
  ExtReal value;
  // True when the value came from probing a table numerically rather than a
  // closed form.
  bool is_estimate = false;
};

// Growth exponent sup{gamma : some depth L <= ell* has
// limsup_n c(n)^L n^{floor(L/2)} / n^gamma in (0, inf]}.  Closed form for
// parametric coefficients; numeric slope fit over [probe_limit/2, probe_limit]
// for table coefficients.
GammaEstimate gamma_star(const GrowthPair& g, std::uint64_t probe_limit);

// Dual form inf{gamma : c(n)^L n^(floor(L/2)) <= C n^gamma for all n, L <= ell*}.
// Agrees with gamma_star exactly on parametric pairs; numeric uniform-bound
// search on the probed prefix for tables.
GammaEstimate gamma_diamond(const GrowthPair& g, std::uint64_t probe_limit);

// The table-path slope estimator behind gamma_star, exposed so parametric
// families can be pushed through the numeric route and checked against their
// closed forms.
GammaEstimate numeric_gamma_star_estimate(const GrowthPair& g, std::uint64_t probe_limit);

}  // namespace nnapprox
