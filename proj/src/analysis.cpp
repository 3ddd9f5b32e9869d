#include "nnapprox/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace nnapprox {

namespace {

constexpr int kDyadicScales = 53;   // separations 2^0 .. 2^-52
constexpr std::size_t kMaxAnchors = 1024;

// Odometer walk over all grid points; fn receives the coordinate vector.
template <typename F>
void for_each_point(const GridSpec& g, F&& fn) {
  const std::size_t P = g.points_per_axis;
  std::vector<std::size_t> idx(g.d, 0);
  std::vector<double> x(g.d);
  const double denom = g.placement == GridPlacement::cell_centers
                           ? static_cast<double>(P)
                           : static_cast<double>(P - 1);
  for (;;) {
    for (std::size_t a = 0; a < g.d; ++a) {
      const double i = static_cast<double>(idx[a]);
      x[a] = g.placement == GridPlacement::cell_centers ? (i + 0.5) / denom : i / denom;
    }
    fn(std::span<const double>(x), std::span<const std::size_t>(idx));
    std::size_t a = 0;
    while (a < g.d && ++idx[a] == P) idx[a++] = 0;
    if (a == g.d) break;
  }
}

double checked_eval(const RealFn& f, std::span<const double> x, const char* op) {
  const double v = f(x);
  if (!std::isfinite(v)) throw evaluation_error(std::string(op) + ": function value not finite");
  return v;
}

struct PairScan {
  double beta;
  SeminormReport best;

  // Quotients use the realized distance between the stored points, not the
  // nominal step, and each difference gives up a few ulps of the sample
  // magnitude as a rounding allowance.  Both choices bias downward: a max of
  // noisy quotients at separations near machine epsilon would otherwise creep
  // above the true seminorm.
  void offer(const RealFn& f, std::span<const double> x, std::span<const double> y,
             const char* op) {
    double dist2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) dist2 += (y[i] - x[i]) * (y[i] - x[i]);
    if (dist2 == 0.0) return;
    const double sep = std::sqrt(dist2);
    const double denom = beta == 1.0 ? sep : std::pow(sep, beta);
    const double fx = checked_eval(f, x, op);
    const double fy = checked_eval(f, y, op);
    const double allowance =
        16.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(fx), std::fabs(fy));
    const double diff = std::fabs(fx - fy) - allowance;
    if (diff <= 0.0) return;
    const double q = diff / denom;
    if (q > best.value) {
      best.value = q;
      best.argmax_x.assign(x.begin(), x.end());
      best.argmax_y.assign(y.begin(), y.end());
    }
  }
};

SeminormReport seminorm_scan(const RealFn& f, double beta, const GridSpec& grid,
                             std::size_t pair_budget, std::uint64_t seed, const char* op) {
  grid.validate();
  if (grid.placement != GridPlacement::lattice)
    throw precondition_error(std::string(op) + ": lattice grid required");
  if (!(beta > 0.0) || beta > 1.0)
    throw precondition_error(std::string(op) + ": beta must lie in (0, 1]");

  PairScan scan{beta, {}};
  scan.best.resolution = grid;
  const std::size_t P = grid.points_per_axis;

  // Axis-adjacent lattice pairs.
  std::vector<double> y;
  for_each_point(grid, [&](std::span<const double> x, std::span<const std::size_t> idx) {
    y.assign(x.begin(), x.end());
    for (std::size_t a = 0; a < grid.d; ++a) {
      if (idx[a] + 1 >= P) continue;
      const double saved = y[a];
      y[a] = static_cast<double>(idx[a] + 1) / static_cast<double>(P - 1);
      scan.offer(f, x, y, op);
      y[a] = saved;
    }
  });

  // Dyadic separations anchored at a strided subset of lattice points.  A
  // uniform lattice cannot resolve features narrower than its spacing, so
  // quotients are also probed at separations 2^-j shrinking to rounding
  // scale, in both axis directions.
  const std::size_t total = grid.total_points();
  const std::size_t stride = std::max<std::size_t>(1, total / kMaxAnchors);
  std::size_t flat = 0;
  for_each_point(grid, [&](std::span<const double> x, std::span<const std::size_t>) {
    const bool keep = flat % stride == 0 || flat + 1 == total;
    ++flat;
    if (!keep) return;
    y.assign(x.begin(), x.end());
    for (std::size_t a = 0; a < grid.d; ++a) {
      double sep = 1.0;
      for (int j = 0; j < kDyadicScales; ++j, sep *= 0.5) {
        for (const double dir : {sep, -sep}) {
          const double moved = x[a] + dir;
          if (moved < 0.0 || moved > 1.0) continue;
          y[a] = moved;
          scan.offer(f, x, y, op);
          y[a] = x[a];
        }
      }
    }
  });

  // Random pairs: alternately a uniform pair and an axis-aligned pair at a
  // random dyadic separation.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> scale_dist(0, kDyadicScales - 1);
  std::vector<double> a(grid.d), b(grid.d);
  for (std::size_t k = 0; k < pair_budget; ++k) {
    for (std::size_t i = 0; i < grid.d; ++i) a[i] = unif(rng);
    if (k % 2 == 0) {
      for (std::size_t i = 0; i < grid.d; ++i) b[i] = unif(rng);
      scan.offer(f, a, b, op);
    } else {
      const std::size_t axis = static_cast<std::size_t>(rng() % grid.d);
      const double sep = std::ldexp(1.0, -scale_dist(rng));
      b = a;
      b[axis] += rng() % 2 == 0 ? sep : -sep;
      if (b[axis] >= 0.0 && b[axis] <= 1.0) scan.offer(f, a, b, op);
    }
  }
  return scan.best;
}

double c1_constant(double p) { return p >= 1.0 ? 1.0 : std::pow(2.0, 1.0 / p - 1.0); }

}  // namespace

GridSpec GridSpec::default_for(std::size_t d, GridPlacement placement) {
  std::size_t P = 0;
  switch (d) {
    case 1: P = 4096; break;
    case 2: P = 256; break;
    case 3: P = 64; break;
    default:
      throw precondition_error("GridSpec: no default grid beyond dimension 3; size explicitly");
  }
  return {d, P, placement};
}

std::size_t GridSpec::total_points() const {
  std::size_t total = 1;
  for (std::size_t a = 0; a < d; ++a) {
    if (total > std::numeric_limits<std::size_t>::max() / points_per_axis)
      throw precondition_error("GridSpec: grid size overflows");
    total *= points_per_axis;
  }
  return total;
}

void GridSpec::validate() const {
  if (d == 0) throw precondition_error("GridSpec: dimension must be >= 1");
  if (points_per_axis < 2) throw precondition_error("GridSpec: need at least 2 points per axis");
  (void)total_points();
}

double lp_norm(const RealFn& f, double p, const GridSpec& grid) {
  if (std::isinf(p) && p > 0)
    return sup_norm(f, {grid.d, grid.points_per_axis, GridPlacement::lattice});
  if (!(p > 0.0) || !std::isfinite(p)) throw precondition_error("lp_norm: p must lie in (0, inf]");
  grid.validate();
  if (grid.placement != GridPlacement::cell_centers)
    throw precondition_error("lp_norm: cell_centers grid required");
  double acc = 0.0;
  for_each_point(grid, [&](std::span<const double> x, std::span<const std::size_t>) {
    acc += std::pow(std::fabs(checked_eval(f, x, "lp_norm")), p);
  });
  return std::pow(acc / static_cast<double>(grid.total_points()), 1.0 / p);
}

double sup_norm(const RealFn& f, const GridSpec& grid) {
  grid.validate();
  if (grid.placement != GridPlacement::lattice)
    throw precondition_error("sup_norm: lattice grid required");
  double best = 0.0;
  for_each_point(grid, [&](std::span<const double> x, std::span<const std::size_t>) {
    best = std::max(best, std::fabs(checked_eval(f, x, "sup_norm")));
  });
  return best;
}

SeminormReport lip_estimate(const RealFn& f, const GridSpec& grid, std::size_t pair_budget,
                            std::uint64_t seed) {
  return seminorm_scan(f, 1.0, grid, pair_budget, seed, "lip_estimate");
}

SeminormReport lip_beta_estimate(const RealFn& f, double beta, const GridSpec& grid,
                                 std::size_t pair_budget, std::uint64_t seed) {
  return seminorm_scan(f, beta, grid, pair_budget, seed, "lip_beta_estimate");
}

double sup_bound_from_lp_lip(double lp, double lip, double T, double p, std::size_t d) {
  if (!(T > 0.0) || T > 1.0) throw precondition_error("sup_bound_from_lp_lip: T must lie in (0, 1]");
  if (!(p > 0.0) || !std::isfinite(p))
    throw precondition_error("sup_bound_from_lp_lip: p must lie in (0, inf)");
  if (lp < 0.0 || lip < 0.0) throw precondition_error("sup_bound_from_lp_lip: norms must be >= 0");
  const double dp = static_cast<double>(d) / p;
  return c1_constant(p) * (lip * T + std::pow(2.0, dp) * std::pow(T, -dp) * lp);
}

double hoelder_bound_from_lp_lip(double lp, double lip, double T, double p, std::size_t d,
                                 double beta) {
  if (!(T > 0.0) || T > 1.0)
    throw precondition_error("hoelder_bound_from_lp_lip: T must lie in (0, 1]");
  if (!(beta > 0.0) || !(beta < 1.0))
    throw precondition_error("hoelder_bound_from_lp_lip: beta must lie in (0, 1)");
  if (lp < 0.0 || lip < 0.0)
    throw precondition_error("hoelder_bound_from_lp_lip: norms must be >= 0");
  const double lead = std::pow(2.0, 1.0 - beta);
  if (std::isinf(p) && p > 0)
    return lead * (std::pow(T, -beta) * lp + std::pow(T, 1.0 - beta) * lip);
  if (!(p > 0.0)) throw precondition_error("hoelder_bound_from_lp_lip: p must lie in (0, inf]");
  const double dp = static_cast<double>(d) / p;
  return lead * std::pow(c1_constant(p), 1.0 - beta) *
         (std::pow(T, -dp - beta) * lp + 2.0 * std::pow(T, 1.0 - beta) * lip);
}

}  // namespace nnapprox
