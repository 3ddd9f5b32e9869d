#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "nnapprox/errors.hpp"

namespace nnapprox {

using RealFn = std::function<double(std::span<const double>)>;

enum class GridPlacement {
  cell_centers,  // midpoints of a uniform cell partition; quadrature grids
  lattice,       // uniform lattice including both endpoints; sup-type grids
};

struct GridSpec {
  std::size_t d = 1;
  std::size_t points_per_axis = 2;
  GridPlacement placement = GridPlacement::lattice;

  // 4096 points per axis in dimension 1, 256 in dimension 2, 64 in dimension
  // 3; higher dimensions must size their grids explicitly.
  static GridSpec default_for(std::size_t d, GridPlacement placement);

  std::size_t total_points() const;
  void validate() const;
};

// Quadrature value of the L^p quasi-norm on [0,1]^d (midpoint rule; requires
// a cell_centers grid).  p = infinity dispatches to sup_norm on the lattice
// grid of the same size.
double lp_norm(const RealFn& f, double p, const GridSpec& grid);

// Max of |f| over a lattice grid.
double sup_norm(const RealFn& f, const GridSpec& grid);

struct SeminormReport {
  double value = 0.0;
  std::vector<double> argmax_x;
  std::vector<double> argmax_y;
  GridSpec resolution;
};

// Lower estimate of the Lipschitz constant: max difference quotient over all
// axis-adjacent lattice pairs, a deterministic family of axis-aligned pairs
// at dyadic separations down to 2^-52 anchored at lattice points, and
// pair_budget random pairs drawn from a generator seeded with `seed`.
SeminormReport lip_estimate(const RealFn& f, const GridSpec& grid, std::size_t pair_budget,
                            std::uint64_t seed);

// Same probe set with quotients |f(x)-f(y)| / |x-y|^beta, beta in (0,1].
SeminormReport lip_beta_estimate(const RealFn& f, double beta, const GridSpec& grid,
                                 std::size_t pair_budget, std::uint64_t seed);

// Explicit sup-norm bound C1(p) * (lip * T + 2^(d/p) * T^(-d/p) * lp) with
// C1 = 1 for p >= 1 and 2^(1/p-1) for p < 1; valid for T in (0,1], p finite.
double sup_bound_from_lp_lip(double lp, double lip, double T, double p, std::size_t d);

// Explicit Hoelder-beta bound.  Finite p:
//   2^(1-beta) * C1(p)^(1-beta) * (T^(-d/p-beta) * lp + 2 * T^(1-beta) * lip);
// p = infinity: 2^(1-beta) * (T^-beta * lp + T^(1-beta) * lip).
double hoelder_bound_from_lp_lip(double lp, double lip, double T, double p, std::size_t d,
                                 double beta);

}  // namespace nnapprox
