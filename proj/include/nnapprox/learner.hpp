#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nnapprox/analysis.hpp"
#include "nnapprox/spaces.hpp"

namespace nnapprox {

// Piecewise-constant interpolant on a uniform partition of [0,1]^d into n
// cells per axis.  Each cell carries the sample at its lower-left corner; the
// upper boundary faces carry the samples of the top corners, so the model
// reproduces f exactly at every sampled lattice point.
class PwConstModel {
 public:
  PwConstModel(std::size_t d, std::size_t cells_per_axis, std::vector<double> corner_values);

  double operator()(std::span<const double> x) const;

  std::size_t d() const { return d_; }
  std::size_t cells_per_axis() const { return n_; }
  std::size_t sample_count() const { return values_.size(); }
  const std::vector<double>& corner_values() const { return values_; }

 private:
  std::size_t d_;
  std::size_t n_;
  std::vector<double> values_;  // (n+1)^d corner samples, row-major in axis order
};

// Fits the corner-sample interpolant within a point budget of m samples:
// n = floor(m^(1/d)) - 1 cells per axis, (n+1)^d <= m evaluations of f.
// Budgets below 2^d cannot place a single cell and are rejected.
PwConstModel fit_pw_const(const RealFn& f, std::uint64_t m, std::size_t d);

// Sup distance between f and its fitted model over a lattice grid at least
// 8 times finer per axis than the model partition.
double learner_sup_error(const RealFn& f, std::uint64_t m, std::size_t d,
                         const GridSpec& eval_grid);

struct RateFit {
  double exponent = 0.0;   // decay rate: error ~ m^-exponent
  double intercept = 0.0;  // log-space intercept
  double max_residual = 0.0;
  std::size_t points_used = 0;
  bool degenerate = false;  // some error was <= 0; exponent reported infinite
};

// Log-log least squares of (budget, error) points; needs >= 3 points with
// strictly increasing budgets.
RateFit fit_rate(std::span<const std::pair<double, double>> points);

struct CorpusMember {
  std::string id;
  RealFn fn;
};

struct OptimalityReport {
  struct Row {
    std::string id;
    std::uint64_t m;
    std::uint64_t cells_per_axis;
    double sup_error;
  };
  std::vector<Row> rows;              // every (function, budget) pair
  std::vector<std::uint64_t> m_used;  // budgets entering the fit
  std::vector<double> worst_errors;   // worst corpus error per used budget
  RateFit fit;
  double predicted_rate = 0.0;
  bool degenerate_all_zero = false;
  bool pass = false;
};

// Worst-case learning rate over a corpus versus the best possible uniform
// sampling rate for the space.  The two smallest budgets are warm-up and do
// not enter the fit, so at least 5 strictly increasing budgets are required.
OptimalityReport optimality_report(const SpaceParams& params,
                                   std::span<const CorpusMember> corpus,
                                   std::span<const std::uint64_t> m_list,
                                   std::uint64_t probe_limit = 100000);

}  // namespace nnapprox
