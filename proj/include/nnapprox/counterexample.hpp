#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nnapprox/relu_net.hpp"
#include "nnapprox/spaces.hpp"

namespace nnapprox {

// Spike profile zeta(x) = relu(1 - M' * sum_i x_i): value 1 at the origin,
// supported on the simplex of diameter 1/M'.
struct ZetaParams {
  ZetaParams(double m_prime_in, std::size_t d_in);
  double m_prime;
  std::size_t d;
};

double zeta_eval(const ZetaParams& z, std::span<const double> x);

struct ZetaLpNorm {
  double exact;        // ((M')^-d * Gamma(p+1) / Gamma(p+d+1))^(1/p)
  double upper_bound;  // (M')^(-d/p), always >= exact
};

// Closed-form L^p norm of the spike on [0,1]^d; p finite and positive.
ZetaLpNorm zeta_lp_norm_exact(const ZetaParams& z, double p);

// Depth-L network with <= (d+L)*n weights, magnitude <= C, realizing
// (M/M') * zeta_{M'}.  Admissible when 0 <= M <= C^L * n^floor(L/2).
Network build_zeta_network(std::size_t d, std::uint64_t n, std::uint64_t L, double C, double M,
                           double M_prime);

// Derived parameters of a witness construction; fields not used by a given
// construction are zero.
struct ConstructionParams {
  double gamma = 0.0;
  double theta = 0.0;
  double beta_exp = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double tau = 0.0;
  double kappa_scale = 0.0;
};

struct CounterexampleInstance {
  std::uint64_t k_index;
  std::uint64_t n_k;
  std::uint64_t L;
  double C;
  double M;
  double M_prime;
  double scale;  // M / M'
  Network net;
  SpaceParams params;
  ConstructionParams construction;
};

struct SkippedInstance {
  std::uint64_t k_index;
  std::string reason;
};

struct SequenceResult {
  std::vector<CounterexampleInstance> instances;
  std::vector<SkippedInstance> skipped;
};

// Witness budgets n_k = 2^(k+3).
std::uint64_t default_budget(std::uint64_t k);

// Sequence of unit-ball members whose sup norms grow like n_k^(beta - theta),
// witnessing failure of the embedding into C.  Requires p < infinity and
// gamma > alpha * p / d.  Instances whose budget is too small to absorb the
// scale constant are skipped and reported.
SequenceResult necessary_C_sequence(const SpaceParams& params, double gamma, std::uint64_t L,
                                    std::span<const std::uint64_t> k_list);

// Sequence whose beta-Hoelder quotients grow like n_k^(theta - tau*(1-beta)),
// witnessing failure of the embedding into C^{0,beta}.  Requires
// gamma > alpha * (1-beta) / (beta + d/p).
SequenceResult necessary_hoelder_sequence(const SpaceParams& params, double beta, double gamma,
                                          std::uint64_t L, std::span<const std::uint64_t> k_list);

struct CertificateReport {
  std::uint64_t budget = 0;    // (d+L) * n_k
  bool membership_ok = false;  // instance lies in the budgeted class
  double chain_value = 0.0;    // budget^alpha * (M/M') * (M')^(-d/p)
  bool chain_ok = false;
  double lp_value = 0.0;       // exact L^p norm of the instance
  double lp_target = 0.0;      // n_k^(-alpha)
  bool lp_ok = false;

  bool all_ok() const { return membership_ok && chain_ok && lp_ok; }
};

// Checks that an instance lies in the quasi-norm unit ball: class membership
// at its budget, the normalization chain bounded by 1, and the exact norm
// under the target rate.  Failures are reported, not thrown.
CertificateReport certify_unit_ball(const CounterexampleInstance& inst);

// Approximation profile of an instance, suitable for gamma_functional and
// quasi_norm: exact norms, distance zero once the budget admits the network.
DistanceProfile instance_profile(const CounterexampleInstance& inst);

}  // namespace nnapprox
