#include "nnapprox/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nnapprox {

namespace {

constexpr double kCertSlack = 1e-9;  // relative slack on certificate inequalities

double dp_ratio(const SpaceParams& params) {
  return std::isinf(params.p) ? 0.0 : static_cast<double>(params.d) / params.p;
}

// log of c(n)^L * n^(floor(L/2) - gamma); +inf when the coefficient is infinite.
double log_growth_ratio(const GrowthPair& growth, std::uint64_t n, std::uint64_t L, double gamma) {
  const ExtReal c = growth.coeff(n);
  if (c.is_infinite()) return std::numeric_limits<double>::infinity();
  if (c.finite_value() <= 0.0) return -std::numeric_limits<double>::infinity();
  const double ln = std::log(static_cast<double>(n));
  return static_cast<double>(L) * std::log(c.finite_value()) +
         (static_cast<double>(L / 2) - gamma) * ln;
}

// Scale constant kappa = min{1, c, (d+L)^-alpha} with c = min{1, c0/2} and c0
// the growth ratio at the largest requested budget.
double kappa_constant(const SpaceParams& params, double gamma, std::uint64_t L,
                      std::span<const std::uint64_t> k_list) {
  std::uint64_t n_top = 0;
  for (std::uint64_t k : k_list) n_top = std::max(n_top, default_budget(k));
  const double log_c0 = log_growth_ratio(params.growth, n_top, L, gamma);
  const double c = std::min(1.0, std::exp(log_c0) / 2.0);
  const double depth_damp =
      std::pow(static_cast<double>(params.d) + static_cast<double>(L), -params.alpha);
  return std::min({1.0, c, depth_damp});
}

void check_depth_budget(const SpaceParams& params, std::uint64_t L,
                        std::span<const std::uint64_t> k_list) {
  if (L < 2) throw precondition_error("witness sequence: depth must be >= 2");
  for (std::uint64_t k : k_list) {
    const std::uint64_t budget = (params.d + L) * default_budget(k);
    const ExtReal ell = params.growth.depth(budget);
    if (ell.is_finite() && ell.finite_value() < static_cast<double>(L))
      throw precondition_error("witness sequence: depth budget at n=" + std::to_string(budget) +
                               " does not admit depth " + std::to_string(L));
  }
}

// Network magnitude bound: the coefficient budget where finite, otherwise
// just large enough to make M admissible.
double magnitude_for(const GrowthPair& growth, std::uint64_t n_k, std::uint64_t L, double M) {
  const ExtReal c = growth.coeff(n_k);
  if (c.is_finite()) return c.finite_value();
  const double log_c = (std::log(std::max(M, 1.0)) -
                        static_cast<double>(L / 2) * std::log(static_cast<double>(n_k))) /
                       static_cast<double>(L);
  return std::max(1.0, std::exp(log_c));
}

}  // namespace

ZetaParams::ZetaParams(double m_prime_in, std::size_t d_in) : m_prime(m_prime_in), d(d_in) {
  if (!(m_prime >= 1.0) || !std::isfinite(m_prime))
    throw precondition_error("ZetaParams: M' must be finite and >= 1");
  if (d == 0) throw precondition_error("ZetaParams: dimension must be >= 1");
}

double zeta_eval(const ZetaParams& z, std::span<const double> x) {
  if (x.size() != z.d) throw precondition_error("zeta_eval: input dimension mismatch");
  double s = 0.0;
  for (double xi : x) s += xi;
  return std::max(0.0, 1.0 - z.m_prime * s);
}

ZetaLpNorm zeta_lp_norm_exact(const ZetaParams& z, double p) {
  if (!(p > 0.0) || !std::isfinite(p))
    throw precondition_error("zeta_lp_norm_exact: p must lie in (0, inf)");
  // Reduction of the simplex integral of (1 - sum u)^p to a Gamma ratio.
  const double dd = static_cast<double>(z.d);
  const double log_ratio = std::lgamma(p + 1.0) - std::lgamma(p + dd + 1.0);
  const double log_integral = -dd * std::log(z.m_prime) + log_ratio;
  ZetaLpNorm r;
  r.exact = std::exp(log_integral / p);
  r.upper_bound = std::pow(z.m_prime, -dd / p);
  return r;
}

Network build_zeta_network(std::size_t d, std::uint64_t n, std::uint64_t L, double C, double M,
                           double M_prime) {
  if (d == 0 || n == 0) throw precondition_error("build_zeta_network: d and n must be >= 1");
  if (L < 2) throw precondition_error("build_zeta_network: depth must be >= 2");
  if (!(C > 0.0) || !std::isfinite(C))
    throw precondition_error("build_zeta_network: C must be finite and > 0");
  if (!(M_prime >= 1.0) || !std::isfinite(M_prime))
    throw precondition_error("build_zeta_network: M' must be finite and >= 1");
  if (!(M >= 0.0) || !std::isfinite(M))
    throw precondition_error("build_zeta_network: M must be finite and >= 0");
  // Absolute slack in log space, i.e. relative slack on the linear scale.
  const double log_mu = static_cast<double>(L) * std::log(C) +
                        static_cast<double>(L / 2) * std::log(static_cast<double>(n));
  if (M > 0.0 && std::log(M) > log_mu + 1e-9)
    throw precondition_error("build_zeta_network: M exceeds C^L * n^floor(L/2)");

  const std::size_t nn = static_cast<std::size_t>(n);
  std::vector<Layer> layers;

  // Input layer: every hidden unit computes relu(C/M' - C * sum x).
  Layer first{nn, d, {}, std::vector<double>(nn, C / M_prime)};
  for (std::size_t i = 0; i < nn; ++i)
    for (std::size_t j = 0; j < d; ++j) first.entries.push_back({i, j, -C});
  layers.push_back(std::move(first));

  auto collapse = [&](double coeff) {  // 1 x n row of `coeff`
    Layer l{1, nn, {}, {0.0}};
    if (coeff != 0.0)
      for (std::size_t j = 0; j < nn; ++j) l.entries.push_back({0, j, coeff});
    return l;
  };
  auto fan_out = [&](double coeff) {  // n x 1 column of `coeff`
    Layer l{nn, 1, {}, std::vector<double>(nn, 0.0)};
    if (coeff != 0.0)
      for (std::size_t i = 0; i < nn; ++i) l.entries.push_back({i, 0, coeff});
    return l;
  };

  // Alternating collapse/fan-out blocks square the accumulated factor C^2 n
  // once per pair of layers; the final layer carries the M/mu rescaling.
  const double out_scale = M == 0.0 ? 0.0 : M / std::exp(log_mu);
  if (L % 2 == 0) {
    const std::uint64_t blocks = (L - 2) / 2;
    layers.push_back(collapse(blocks == 0 ? C * out_scale : C));
    for (std::uint64_t b = 0; b < blocks; ++b) {
      layers.push_back(fan_out(C));
      layers.push_back(collapse(b + 1 == blocks ? C * out_scale : C));
    }
  } else {
    const std::uint64_t blocks = (L - 3) / 2;
    layers.push_back(collapse(C));
    for (std::uint64_t b = 0; b < blocks; ++b) {
      layers.push_back(fan_out(C));
      layers.push_back(collapse(C));
    }
    Layer last{1, 1, {}, {0.0}};
    if (out_scale != 0.0) last.entries.push_back({0, 0, C * out_scale});
    layers.push_back(std::move(last));
  }
  return Network(std::move(layers));
}

std::uint64_t default_budget(std::uint64_t k) {
  if (k > 55) throw precondition_error("default_budget: index too large");
  return std::uint64_t{1} << (k + 3);
}

SequenceResult necessary_C_sequence(const SpaceParams& params, double gamma, std::uint64_t L,
                                    std::span<const std::uint64_t> k_list) {
  params.validate();
  if (std::isinf(params.p))
    throw precondition_error("necessary_C_sequence: requires p < infinity");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw precondition_error("necessary_C_sequence: gamma must be finite and > 0");
  const double dd = static_cast<double>(params.d);
  if (!(gamma > params.alpha * params.p / dd))
    throw precondition_error("necessary_C_sequence: gamma must exceed alpha * p / d");
  if (k_list.empty()) throw precondition_error("necessary_C_sequence: empty budget list");
  check_depth_budget(params, L, k_list);

  ConstructionParams cons;
  cons.gamma = gamma;
  cons.theta = 0.5 * (gamma + params.alpha * params.p / dd);
  cons.delta1 = cons.theta * dd / params.p - params.alpha;
  cons.delta2 = gamma - cons.theta;
  cons.beta_exp = cons.theta + std::min(cons.delta1, cons.delta2);
  cons.kappa_scale = kappa_constant(params, gamma, L, k_list);

  SequenceResult result;
  for (std::uint64_t k : k_list) {
    const std::uint64_t n_k = default_budget(k);
    const double nd = static_cast<double>(n_k);
    const double M_prime = std::pow(nd, cons.theta);
    const double M = cons.kappa_scale * std::pow(nd, cons.beta_exp);
    if (!std::isfinite(M_prime) || !std::isfinite(M))
      throw evaluation_error("necessary_C_sequence: scale overflow at k=" + std::to_string(k));
    if (M_prime > M) {
      result.skipped.push_back({k, "budget too small: n^theta exceeds kappa * n^beta"});
      continue;
    }
    if (log_growth_ratio(params.growth, n_k, L, gamma) <
        std::log(cons.kappa_scale) - 1e-9) {
      result.skipped.push_back({k, "growth ratio below the scale constant at this budget"});
      continue;
    }
    const double C = magnitude_for(params.growth, n_k, L, M);
    result.instances.push_back({k, n_k, L, C, M, M_prime, M / M_prime,
                                build_zeta_network(params.d, n_k, L, C, M, M_prime), params,
                                cons});
  }
  return result;
}

SequenceResult necessary_hoelder_sequence(const SpaceParams& params, double beta, double gamma,
                                          std::uint64_t L, std::span<const std::uint64_t> k_list) {
  params.validate();
  if (!(beta > 0.0) || !(beta < 1.0))
    throw precondition_error("necessary_hoelder_sequence: beta must lie in (0, 1)");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw precondition_error("necessary_hoelder_sequence: gamma must be finite and > 0");
  const double dp = dp_ratio(params);
  if (!(gamma > params.alpha * (1.0 - beta) / (beta + dp)))
    throw precondition_error(
        "necessary_hoelder_sequence: gamma must exceed alpha * (1-beta) / (beta + d/p)");
  if (k_list.empty()) throw precondition_error("necessary_hoelder_sequence: empty budget list");
  check_depth_budget(params, L, k_list);

  ConstructionParams cons;
  cons.gamma = gamma;
  cons.tau = 0.5 * (params.alpha / (beta + dp) + gamma / (1.0 - beta));
  const double theta_hi = std::min(gamma, cons.tau * (1.0 + dp) - params.alpha);
  cons.theta = 0.5 * (cons.tau * (1.0 - beta) + theta_hi);
  cons.kappa_scale = kappa_constant(params, gamma, L, k_list);

  SequenceResult result;
  for (std::uint64_t k : k_list) {
    const std::uint64_t n_k = default_budget(k);
    const double nd = static_cast<double>(n_k);
    const double M_prime = std::pow(nd, cons.tau);
    const double M = cons.kappa_scale * std::pow(nd, cons.theta);
    if (!std::isfinite(M_prime) || !std::isfinite(M))
      throw evaluation_error("necessary_hoelder_sequence: scale overflow at k=" +
                             std::to_string(k));
    if (log_growth_ratio(params.growth, n_k, L, gamma) <
        std::log(cons.kappa_scale) - 1e-9) {
      result.skipped.push_back({k, "growth ratio below the scale constant at this budget"});
      continue;
    }
    const double C = magnitude_for(params.growth, n_k, L, M);
    result.instances.push_back({k, n_k, L, C, M, M_prime, M / M_prime,
                                build_zeta_network(params.d, n_k, L, C, M, M_prime), params,
                                cons});
  }
  return result;
}

CertificateReport certify_unit_ball(const CounterexampleInstance& inst) {
  CertificateReport rep;
  rep.budget = (inst.params.d + inst.L) * inst.n_k;
  rep.membership_ok = in_sigma(inst.net, rep.budget, inst.params.growth, inst.params.d);

  const double dp = dp_ratio(inst.params);
  rep.chain_value = std::pow(static_cast<double>(rep.budget), inst.params.alpha) * inst.scale *
                    std::pow(inst.M_prime, -dp);
  rep.chain_ok = rep.chain_value <= 1.0 + kCertSlack;

  const double lp_exact = std::isinf(inst.params.p)
                              ? 1.0
                              : zeta_lp_norm_exact(ZetaParams(inst.M_prime, inst.params.d),
                                                   inst.params.p)
                                    .exact;
  rep.lp_value = inst.scale * lp_exact;
  rep.lp_target = std::pow(static_cast<double>(inst.n_k), -inst.params.alpha);
  rep.lp_ok = rep.lp_value <= rep.lp_target * (1.0 + kCertSlack) && rep.lp_value <= 1.0 + kCertSlack;
  return rep;
}

DistanceProfile instance_profile(const CounterexampleInstance& inst) {
  const double lp_exact = std::isinf(inst.params.p)
                              ? 1.0
                              : zeta_lp_norm_exact(ZetaParams(inst.M_prime, inst.params.d),
                                                   inst.params.p)
                                    .exact;
  const double norm_at_one = inst.scale * lp_exact;
  const std::uint64_t budget = (inst.params.d + inst.L) * inst.n_k;
  // Rescaling the final layer by 1/s preserves depth and weight count; the
  // magnitude bound survives exactly when M/s stays below C^L n^floor(L/2).
  const double log_mu = static_cast<double>(inst.L) * std::log(inst.C) +
                        static_cast<double>(inst.L / 2) * std::log(static_cast<double>(inst.n_k));
  const double M = inst.M;
  DistanceProfile profile;
  profile.lp_norm_at = [norm_at_one](double s) { return norm_at_one / s; };
  profile.dist_at = [norm_at_one, budget, log_mu, M](std::uint64_t n, double s) {
    const bool member = n >= budget && (M == 0.0 || std::log(M / s) <= log_mu + 1e-12);
    return member ? 0.0 : norm_at_one / s;
  };
  return profile;
}

}  // namespace nnapprox
