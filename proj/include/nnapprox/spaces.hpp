#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "json.hpp"
#include "nnapprox/ext_real.hpp"
#include "nnapprox/growth.hpp"
#include "nnapprox/relu_net.hpp"

namespace nnapprox {

// Parameters of an approximation space: smoothness alpha > 0, integrability
// p in (0, inf] (IEEE infinity for the sup norm), input dimension d >= 1, and
// the depth/coefficient budget pair.
struct SpaceParams {
  double alpha;
  double p;
  std::size_t d;
  GrowthPair growth;

  void validate() const;
};

// Approximation data for one function f: its L^p norm at a given rescaling
// and an upper bound for the distance from f/scale to the budget-n class.
struct DistanceProfile {
  std::function<double(double scale)> lp_norm_at;
  std::function<double(std::uint64_t n, double scale)> dist_at;
};

struct GammaFunctionalResult {
  double value = 0.0;
  std::uint64_t attained_n = 0;  // 0 when the plain norm term dominates
  std::uint64_t n_max = 0;
};

// max{ lp_norm, max_{1<=n<=n_max} n^alpha * dist(n) } at scale 1.
GammaFunctionalResult gamma_functional(const DistanceProfile& profile, const SpaceParams& params,
                                       std::uint64_t n_max);

// Quasi-norm inf{theta > 0 : gamma_functional(f/theta) <= 1}, located by
// doubling then bisection to absolute tolerance tol.  The returned value is
// always a certified upper bound (its functional value is <= 1).
double quasi_norm(const DistanceProfile& profile, const SpaceParams& params, std::uint64_t n_max,
                  double tol);

enum class VerdictKind { embeds, fails, critical };

struct Verdict {
  VerdictKind kind;
  double threshold;    // critical smoothness the comparison is made against
  double comparison;   // the space's alpha
  double margin;       // comparison - threshold (signed)
  ExtReal gamma_star;
  bool estimated;

  nlohmann::json to_json() const;
};

// Verdict for embedding into C([0,1]^d): embeds iff alpha > (d/p) * gamma
// with gamma the growth exponent; p = infinity always embeds.  |margin| <=
// tol lands in the critical band; an estimated gamma with margin < 2*tol is
// refused outright.
Verdict embedding_verdict_C(const SpaceParams& params, const GammaEstimate& gamma, double tol);

// Verdict for embedding into C^{0,beta}: threshold ((beta + d/p)/(1 - beta)) * gamma.
Verdict embedding_verdict_hoelder(const SpaceParams& params, double beta,
                                  const GammaEstimate& gamma, double tol);

// Uniform-convergence exponent mu = (p/(d+p)) * (alpha - (d/p)*gamma) for
// gamma strictly below (p/d)*alpha.
double secondary_embedding_exponent(const SpaceParams& params, double gamma);

// Best possible uniform sampling rate (1/d) * alpha/(gamma_star + alpha);
// zero when the depth budget is unbounded.
double optimal_sampling_rate(double alpha, std::size_t d, ExtReal gamma_star_value,
                             ExtReal ell_star_value);

struct CauchyReport {
  std::vector<double> diffs;      // sup |F_{m+1} - F_m| over the grid
  double fitted_exponent = 0.0;   // decay rate in 2^-(exponent * m)
  bool exponent_infinite = false; // all successive differences were zero
  double mu = 0.0;
  bool passes = false;
};

// Fits the uniform decay rate of successive differences of a network
// sequence (nets[m] is the budget-2^m approximant) and compares it against
// the secondary embedding exponent; needs at least 4 networks.
CauchyReport uniform_cauchy_check(std::span<const Network> nets, double alpha, double gamma,
                                  double p, std::size_t d, std::size_t grid_points);

}  // namespace nnapprox
