#include "nnapprox/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nnapprox {

namespace {

// Largest r >= 1 with r^d <= m, immune to pow rounding.
std::uint64_t integer_root(std::uint64_t m, std::size_t d) {
  std::uint64_t r = static_cast<std::uint64_t>(
      std::floor(std::pow(static_cast<double>(m), 1.0 / static_cast<double>(d))));
  auto pow_le = [&](std::uint64_t base) {
    std::uint64_t acc = 1;
    for (std::size_t i = 0; i < d; ++i) {
      if (base != 0 && acc > m / base) return false;
      acc *= base;
    }
    return acc <= m;
  };
  while (r > 1 && !pow_le(r)) --r;
  while (pow_le(r + 1)) ++r;
  return r;
}

// Cell index along one axis: the unique i with corner(i) <= x < corner(i+1),
// where corners are the represented doubles i/n; x on the top face maps to n
// so lattice samples are reproduced exactly.  The multiply gives a hint that
// boundary comparisons then correct.
std::size_t axis_cell(double x, std::size_t n) {
  const double nd = static_cast<double>(n);
  double hint = std::floor(std::min(std::max(x, 0.0), 1.0) * nd);
  std::size_t i = static_cast<std::size_t>(std::min(hint, nd));
  while (i > 0 && x < static_cast<double>(i) / nd) --i;
  while (i < n && x >= static_cast<double>(i + 1) / nd) ++i;
  return i;
}

}  // namespace

PwConstModel::PwConstModel(std::size_t d, std::size_t cells_per_axis,
                           std::vector<double> corner_values)
    : d_(d), n_(cells_per_axis), values_(std::move(corner_values)) {
  if (d_ == 0) throw precondition_error("PwConstModel: dimension must be >= 1");
  if (n_ == 0) throw precondition_error("PwConstModel: need at least one cell per axis");
  std::size_t expect = 1;
  for (std::size_t a = 0; a < d_; ++a) expect *= n_ + 1;
  if (values_.size() != expect)
    throw precondition_error("PwConstModel: corner value count does not match the partition");
}

double PwConstModel::operator()(std::span<const double> x) const {
  if (x.size() != d_) throw precondition_error("PwConstModel: input dimension mismatch");
  std::size_t flat = 0;
  std::size_t stride = 1;
  for (std::size_t a = 0; a < d_; ++a) {
    flat += axis_cell(x[a], n_) * stride;
    stride *= n_ + 1;
  }
  return values_[flat];
}

PwConstModel fit_pw_const(const RealFn& f, std::uint64_t m, std::size_t d) {
  if (d == 0) throw precondition_error("fit_pw_const: dimension must be >= 1");
  if (m < (std::uint64_t{1} << d))
    throw precondition_error("fit_pw_const: budget below 2^d cannot place a cell");
  const std::size_t n = static_cast<std::size_t>(integer_root(m, d) - 1);
  std::size_t total = 1;
  for (std::size_t a = 0; a < d; ++a) total *= n + 1;
  std::vector<double> values(total);
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> x(d);
  for (std::size_t flat = 0; flat < total; ++flat) {
    for (std::size_t a = 0; a < d; ++a)
      x[a] = static_cast<double>(idx[a]) / static_cast<double>(n);
    const double v = f(x);
    if (!std::isfinite(v)) throw evaluation_error("fit_pw_const: sample value not finite");
    values[flat] = v;
    std::size_t a = 0;
    while (a < d && ++idx[a] == n + 1) idx[a++] = 0;
  }
  return PwConstModel(d, n, std::move(values));
}

double learner_sup_error(const RealFn& f, std::uint64_t m, std::size_t d,
                         const GridSpec& eval_grid) {
  eval_grid.validate();
  if (eval_grid.d != d) throw precondition_error("learner_sup_error: grid dimension mismatch");
  if (eval_grid.placement != GridPlacement::lattice)
    throw precondition_error("learner_sup_error: lattice evaluation grid required");
  const PwConstModel model = fit_pw_const(f, m, d);
  if (eval_grid.points_per_axis < 8 * model.cells_per_axis())
    throw precondition_error(
        "learner_sup_error: evaluation grid must be at least 8x finer per axis than the model");
  RealFn gap = [&](std::span<const double> x) { return f(x) - model(x); };
  return sup_norm(gap, eval_grid);
}

RateFit fit_rate(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw precondition_error("fit_rate: need at least 3 points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].first > 0.0)) throw precondition_error("fit_rate: budgets must be > 0");
    if (i > 0 && points[i].first <= points[i - 1].first)
      throw precondition_error("fit_rate: budgets must be strictly increasing");
  }
  RateFit r;
  r.points_used = points.size();
  for (const auto& [m, e] : points) {
    (void)m;
    if (e <= 0.0) {
      // A zero error cannot enter a log fit; the decay is faster than any
      // power law on this data.
      r.degenerate = true;
      r.exponent = std::numeric_limits<double>::infinity();
      return r;
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [m, e] : points) {
    const double x = std::log(m);
    const double y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double nn = static_cast<double>(points.size());
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  r.exponent = -slope;
  r.intercept = (sy - slope * sx) / nn;
  for (const auto& [m, e] : points)
    r.max_residual =
        std::max(r.max_residual, std::fabs(r.intercept + slope * std::log(m) - std::log(e)));
  return r;
}

OptimalityReport optimality_report(const SpaceParams& params,
                                   std::span<const CorpusMember> corpus,
                                   std::span<const std::uint64_t> m_list,
                                   std::uint64_t probe_limit) {
  params.validate();
  if (corpus.empty()) throw precondition_error("optimality_report: empty corpus");
  if (m_list.size() < 5)
    throw precondition_error(
        "optimality_report: need at least 5 budgets (the smallest two are warm-up)");
  for (std::size_t i = 1; i < m_list.size(); ++i)
    if (m_list[i] <= m_list[i - 1])
      throw precondition_error("optimality_report: budgets must be strictly increasing");

  OptimalityReport rep;
  rep.predicted_rate = optimal_sampling_rate(params.alpha, params.d,
                                             gamma_star(params.growth, probe_limit).value,
                                             ell_star(params.growth));

  for (std::uint64_t m : m_list) {
    const std::uint64_t n = integer_root(m, params.d) - 1;
    if (n == 0) throw precondition_error("optimality_report: budget too small for one cell");
    const std::size_t eval_points = static_cast<std::size_t>(8 * n + 1);
    const GridSpec eval_grid{params.d, eval_points, GridPlacement::lattice};
    double worst = 0.0;
    for (const CorpusMember& member : corpus) {
      const double e = learner_sup_error(member.fn, m, params.d, eval_grid);
      rep.rows.push_back({member.id, m, n, e});
      worst = std::max(worst, e);
    }
    rep.m_used.push_back(m);
    rep.worst_errors.push_back(worst);
  }

  // Drop the two smallest budgets: tiny partitions sit in a pre-asymptotic
  // regime that would bias the fitted rate.
  rep.m_used.erase(rep.m_used.begin(), rep.m_used.begin() + 2);
  rep.worst_errors.erase(rep.worst_errors.begin(), rep.worst_errors.begin() + 2);

  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < rep.m_used.size(); ++i)
    pts.emplace_back(static_cast<double>(rep.m_used[i]), rep.worst_errors[i]);
  rep.degenerate_all_zero =
      std::all_of(pts.begin(), pts.end(), [](const auto& p) { return p.second <= 0.0; });
  rep.fit = fit_rate(pts);
  rep.pass = rep.degenerate_all_zero || rep.fit.degenerate ||
             rep.fit.exponent >= rep.predicted_rate - 0.1;
  return rep;
}

}  // namespace nnapprox
