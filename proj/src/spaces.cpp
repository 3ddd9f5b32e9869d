#include "nnapprox/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nnapprox/analysis.hpp"

namespace nnapprox {

void SpaceParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw precondition_error("SpaceParams: alpha must be finite and > 0");
  if (!(p > 0.0)) throw precondition_error("SpaceParams: p must lie in (0, inf]");
  if (d == 0) throw precondition_error("SpaceParams: dimension must be >= 1");
}

GammaFunctionalResult gamma_functional(const DistanceProfile& profile, const SpaceParams& params,
                                       std::uint64_t n_max) {
  params.validate();
  if (n_max == 0) throw precondition_error("gamma_functional: n_max must be >= 1");
  if (!profile.lp_norm_at || !profile.dist_at)
    throw precondition_error("gamma_functional: profile callbacks must be set");
  GammaFunctionalResult r;
  r.n_max = n_max;
  const double norm = profile.lp_norm_at(1.0);
  if (!std::isfinite(norm) || norm < 0.0)
    throw evaluation_error("gamma_functional: norm oracle returned a bad value");
  r.value = norm;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const double dist = profile.dist_at(n, 1.0);
    if (!std::isfinite(dist) || dist < 0.0)
      throw evaluation_error("gamma_functional: distance oracle returned a bad value at n=" +
                             std::to_string(n));
    const double term = std::pow(static_cast<double>(n), params.alpha) * dist;
    if (!std::isfinite(term))
      throw evaluation_error("gamma_functional: term overflow at n=" + std::to_string(n));
    if (term > r.value) {
      r.value = term;
      r.attained_n = n;
    }
  }
  return r;
}

namespace {

double functional_at_scale(const DistanceProfile& profile, const SpaceParams& params,
                           std::uint64_t n_max, double theta) {
  DistanceProfile scaled;
  scaled.lp_norm_at = [&profile, theta](double s) { return profile.lp_norm_at(theta * s); };
  scaled.dist_at = [&profile, theta](std::uint64_t n, double s) {
    return profile.dist_at(n, theta * s);
  };
  return gamma_functional(scaled, params, n_max).value;
}

}  // namespace

double quasi_norm(const DistanceProfile& profile, const SpaceParams& params, std::uint64_t n_max,
                  double tol) {
  if (!(tol > 0.0)) throw precondition_error("quasi_norm: tol must be > 0");
  // Scaling down can only shrink the functional (the profile represents f at
  // scale theta by f/theta), so the feasible set is an interval and the
  // doubling/bisection pair brackets its left endpoint.
  double hi = 1.0;
  constexpr double kScaleCap = 1152921504606846976.0;  // 2^60
  while (functional_at_scale(profile, params, n_max, hi) > 1.0) {
    hi *= 2.0;
    if (hi > kScaleCap)
      throw divergence_error("quasi_norm: no admissible scale below 2^60; functional diverges");
  }
  double lo = 0.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval below double resolution
    if (functional_at_scale(profile, params, n_max, mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

namespace {

const char* kind_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::embeds: return "Embeds";
    case VerdictKind::fails: return "Fails";
    case VerdictKind::critical: return "Critical";
  }
  return "?";
}

// JSON has no infinities; persist them as strings.
nlohmann::json json_real(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

double mu_exponent(double alpha, double p, std::size_t d, double gamma) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw precondition_error("secondary_embedding_exponent: alpha must be finite and > 0");
  if (!(p > 0.0)) throw precondition_error("secondary_embedding_exponent: p must lie in (0, inf]");
  if (d == 0) throw precondition_error("secondary_embedding_exponent: dimension must be >= 1");
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw precondition_error("secondary_embedding_exponent: gamma must be finite and >= 0");
  if (std::isinf(p)) return alpha;  // limit p -> inf
  const double dd = static_cast<double>(d);
  if (gamma >= p / dd * alpha)
    throw precondition_error(
        "secondary_embedding_exponent: gamma must be strictly below (p/d) * alpha");
  return p / (dd + p) * (alpha - dd / p * gamma);
}

Verdict make_verdict(double alpha, ExtReal threshold, const GammaEstimate& gamma, double tol) {
  Verdict v{VerdictKind::critical, threshold.as_double(), alpha,
            alpha - threshold.as_double(), gamma.value, gamma.is_estimate};
  if (threshold.is_infinite()) {
    // Finite alpha can never clear an infinite critical index.
    v.kind = VerdictKind::fails;
    v.margin = -std::numeric_limits<double>::infinity();
    return v;
  }
  const double band = tol * std::max(1.0, std::fabs(v.threshold));
  if (gamma.is_estimate && std::fabs(v.margin) < 2.0 * band)
    throw indeterminate_error(
        "verdict: estimated growth exponent too close to the critical band; "
        "tighten the estimate or widen the tolerance");
  if (std::fabs(v.margin) <= band)
    v.kind = VerdictKind::critical;
  else
    v.kind = v.margin > 0.0 ? VerdictKind::embeds : VerdictKind::fails;
  return v;
}

}  // namespace

nlohmann::json Verdict::to_json() const {
  nlohmann::json j{{"kind", kind_name(kind)},
                   {"threshold", json_real(threshold)},
                   {"comparison", comparison},
                   {"margin", json_real(margin)},
                   {"estimated", estimated}};
  if (gamma_star.is_infinite())
    j["gamma_star"] = "inf";
  else
    j["gamma_star"] = gamma_star.finite_value();
  return j;
}

Verdict embedding_verdict_C(const SpaceParams& params, const GammaEstimate& gamma, double tol) {
  params.validate();
  if (!(tol >= 0.0)) throw precondition_error("verdict: tol must be >= 0");
  if (std::isinf(params.p)) {
    // Bounded parameter regime: the space already consists of uniform limits.
    return Verdict{VerdictKind::embeds, 0.0, params.alpha, params.alpha, gamma.value,
                   gamma.is_estimate};
  }
  const double dp = static_cast<double>(params.d) / params.p;
  ExtReal threshold = gamma.value.is_infinite() ? ExtReal::infinity()
                                                : ExtReal(dp * gamma.value.finite_value());
  return make_verdict(params.alpha, threshold, gamma, tol);
}

Verdict embedding_verdict_hoelder(const SpaceParams& params, double beta,
                                  const GammaEstimate& gamma, double tol) {
  params.validate();
  if (!(beta > 0.0) || !(beta < 1.0))
    throw precondition_error("verdict: beta must lie in (0, 1)");
  if (!(tol >= 0.0)) throw precondition_error("verdict: tol must be >= 0");
  const double dp = std::isinf(params.p) ? 0.0 : static_cast<double>(params.d) / params.p;
  const double factor = (beta + dp) / (1.0 - beta);
  ExtReal threshold = gamma.value.is_infinite() ? ExtReal::infinity()
                                                : ExtReal(factor * gamma.value.finite_value());
  return make_verdict(params.alpha, threshold, gamma, tol);
}

double secondary_embedding_exponent(const SpaceParams& params, double gamma) {
  params.validate();
  return mu_exponent(params.alpha, params.p, params.d, gamma);
}

double optimal_sampling_rate(double alpha, std::size_t d, ExtReal gamma_star_value,
                             ExtReal ell_star_value) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw precondition_error("optimal_sampling_rate: alpha must be finite and > 0");
  if (d == 0) throw precondition_error("optimal_sampling_rate: dimension must be >= 1");
  if (ell_star_value.is_infinite()) return 0.0;
  if (gamma_star_value.is_infinite()) return 0.0;
  const double g = gamma_star_value.finite_value();
  return alpha / (g + alpha) / static_cast<double>(d);
}

CauchyReport uniform_cauchy_check(std::span<const Network> nets, double alpha, double gamma,
                                  double p, std::size_t d, std::size_t grid_points) {
  if (nets.size() < 4)
    throw precondition_error("uniform_cauchy_check: need at least 4 networks to fit a rate");
  CauchyReport rep;
  rep.mu = mu_exponent(alpha, p, d, gamma);

  const GridSpec grid{d, grid_points, GridPlacement::lattice};
  for (std::size_t m = 0; m + 1 < nets.size(); ++m) {
    const Network& a = nets[m];
    const Network& b = nets[m + 1];
    RealFn diff = [&a, &b](std::span<const double> x) {
      return a.realize(x)[0] - b.realize(x)[0];
    };
    rep.diffs.push_back(sup_norm(diff, grid));
  }

  // Least squares of log2 diffs against the index; zero differences carry no
  // slope information and are dropped, and an all-zero sequence is flagged as
  // infinitely fast decay.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t used = 0;
  for (std::size_t m = 0; m < rep.diffs.size(); ++m) {
    if (rep.diffs[m] <= 0.0) continue;
    const double x = static_cast<double>(m);
    const double y = std::log2(rep.diffs[m]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used < 2) {
    rep.exponent_infinite = true;
    rep.passes = true;
    return rep;
  }
  const double denom = static_cast<double>(used) * sxx - sx * sx;
  if (denom == 0.0) {
    rep.exponent_infinite = true;
    rep.passes = true;
    return rep;
  }
  rep.fitted_exponent = -((static_cast<double>(used) * sxy - sx * sy) / denom);
  rep.passes = rep.fitted_exponent >= rep.mu - 0.1;
  return rep;
}

}  // namespace nnapprox
