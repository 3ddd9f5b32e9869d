#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "doctest.h"
#include "nnapprox/learner.hpp"

using namespace nnapprox;

namespace {

SpaceParams space(double alpha, std::size_t d) {
  return {alpha, 1.0, d, GrowthPair(GrowthFn::constant(2.0), GrowthFn::power_log(0.0, 0.0))};
}

}  // namespace

TEST_CASE("interpolant reproduces every sampled corner exactly") {
  // Non-dyadic partition: the represented corners fl(i/n) round, and cell
  // lookup must still map each one to its own corner value.
  const RealFn f = [](std::span<const double> x) {
    return std::sin(5.0 * x[0]) + 0.25 * x[0];
  };
  const PwConstModel model = fit_pw_const(f, 8, 1);  // n = 7 cells
  CHECK(model.cells_per_axis() == 7);
  CHECK(model.sample_count() == 8);
  for (std::size_t i = 0; i <= 7; ++i) {
    const double x = static_cast<double>(i) / 7.0;
    CHECK(model(std::vector<double>{x}) == f(std::vector<double>{x}));
  }
}

TEST_CASE("interpolant reproduces corners in two dimensions") {
  const RealFn f = [](std::span<const double> x) {
    return std::cos(3.0 * x[0]) * x[1] + x[0];
  };
  const PwConstModel model = fit_pw_const(f, 36, 2);  // n = 5 cells per axis
  CHECK(model.cells_per_axis() == 5);
  CHECK(model.sample_count() == 36);
  for (std::size_t i = 0; i <= 5; ++i)
    for (std::size_t j = 0; j <= 5; ++j) {
      const std::vector<double> x = {static_cast<double>(i) / 5.0,
                                     static_cast<double>(j) / 5.0};
      CHECK(model(x) == f(x));
    }
}

TEST_CASE("interior points take the lower corner value") {
  const RealFn f = [](std::span<const double> x) { return 10.0 * x[0]; };
  const PwConstModel model = fit_pw_const(f, 5, 1);  // n = 4, corners at i/4
  CHECK(model(std::vector<double>{0.1}) == f(std::vector<double>{0.0}));
  CHECK(model(std::vector<double>{0.26}) == f(std::vector<double>{0.25}));
  CHECK(model(std::vector<double>{0.999}) == f(std::vector<double>{0.75}));
  // The right boundary belongs to the top corner, keeping it interpolated.
  CHECK(model(std::vector<double>{1.0}) == f(std::vector<double>{1.0}));
}

TEST_CASE("sample budget accounting is exact") {
  std::size_t calls = 0;
  const RealFn f = [&calls](std::span<const double> x) {
    ++calls;
    return x[0];
  };
  fit_pw_const(f, 100, 1);  // n = 99, corners 100
  CHECK(calls == 100);
  calls = 0;
  fit_pw_const(f, 1000000, 3);  // n = 99, corners 100^3
  CHECK(calls == 1000000);
  CHECK_THROWS_AS(fit_pw_const(f, 7, 3), precondition_error);  // below 2^d
}

TEST_CASE("cell counts follow the integer root of the budget") {
  const RealFn f = [](std::span<const double> x) { return x[0]; };
  CHECK(fit_pw_const(f, 16, 1).cells_per_axis() == 15);
  CHECK(fit_pw_const(f, 17, 1).cells_per_axis() == 16);
  CHECK(fit_pw_const(f, 16, 2).cells_per_axis() == 3);
  CHECK(fit_pw_const(f, 15, 2).cells_per_axis() == 2);
  CHECK(fit_pw_const(f, 1u << 20, 2).cells_per_axis() == 1023);
}

TEST_CASE("sup error of the fitted model brackets the cell oscillation") {
  const RealFn f = [](std::span<const double> x) { return 3.0 * x[0] - 1.0; };
  const std::uint64_t m = 65;  // n = 64 cells
  const GridSpec eval{1, 4096, GridPlacement::lattice};
  const double err = learner_sup_error(f, m, 1, eval);
  CHECK(err <= 3.0 / 64.0 + 1e-12);
  CHECK(err >= 0.5 * 3.0 / 64.0);
  // Coarse evaluation grids cannot certify the gap.
  const GridSpec coarse{1, 256, GridPlacement::lattice};
  CHECK_THROWS_AS(learner_sup_error(f, m, 1, coarse), precondition_error);
}

TEST_CASE("rate fit recovers exact power laws") {
  const std::vector<std::pair<double, double>> pts = {
      {10.0, 0.1}, {100.0, 0.01}, {1000.0, 0.001}};
  const RateFit fit = fit_rate(pts);
  CHECK(fit.exponent == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.max_residual <= 1e-12);
  CHECK(fit.points_used == 3);
  CHECK_FALSE(fit.degenerate);

  const std::vector<std::pair<double, double>> half = {
      {16.0, 0.25}, {64.0, 0.125}, {256.0, 0.0625}, {1024.0, 0.03125}};
  CHECK(fit_rate(half).exponent == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("rate fit flags exact hits as degenerate") {
  const std::vector<std::pair<double, double>> pts = {
      {10.0, 0.1}, {100.0, 0.0}, {1000.0, 0.001}};
  const RateFit fit = fit_rate(pts);
  CHECK(fit.degenerate);
  CHECK(std::isinf(fit.exponent));
}

TEST_CASE("rate fit validates its sample") {
  const std::vector<std::pair<double, double>> two = {{10.0, 0.1}, {100.0, 0.01}};
  CHECK_THROWS_AS(fit_rate(two), precondition_error);
  const std::vector<std::pair<double, double>> unsorted = {
      {100.0, 0.1}, {10.0, 0.01}, {1000.0, 0.001}};
  CHECK_THROWS_AS(fit_rate(unsorted), precondition_error);
}

TEST_CASE("optimality report drops the two warm-up budgets") {
  const std::vector<CorpusMember> corpus = {
      {"affine", [](std::span<const double> x) { return 2.0 * x[0]; }}};
  const std::vector<std::uint64_t> m_list = {16, 32, 64, 128, 256, 512};
  const OptimalityReport rep = optimality_report(space(1.0, 1), corpus, m_list);

  CHECK(rep.rows.size() == m_list.size());
  REQUIRE(rep.m_used.size() == 4);  // 64 .. 512
  CHECK(rep.m_used.front() == 64);
  CHECK(rep.worst_errors.size() == 4);

  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < rep.m_used.size(); ++i)
    pts.emplace_back(static_cast<double>(rep.m_used[i]), rep.worst_errors[i]);
  const RateFit manual = fit_rate(pts);
  CHECK(rep.fit.exponent == doctest::Approx(manual.exponent));
  // Affine in one dimension decays like 1/m.
  CHECK(rep.fit.exponent == doctest::Approx(1.0).epsilon(0.1));
  CHECK(rep.predicted_rate == doctest::Approx(0.5));
  CHECK(rep.pass);
}

TEST_CASE("optimality report needs five increasing budgets") {
  const std::vector<CorpusMember> corpus = {
      {"affine", [](std::span<const double> x) { return x[0]; }}};
  const std::vector<std::uint64_t> short_list = {16, 32, 64, 128};
  CHECK_THROWS_AS(optimality_report(space(1.0, 1), corpus, short_list), precondition_error);
  const std::vector<std::uint64_t> repeat = {16, 32, 32, 64, 128};
  CHECK_THROWS_AS(optimality_report(space(1.0, 1), corpus, repeat), precondition_error);
  const std::vector<CorpusMember> empty;
  const std::vector<std::uint64_t> ok = {16, 32, 64, 128, 256};
  CHECK_THROWS_AS(optimality_report(space(1.0, 1), empty, ok), precondition_error);
}

TEST_CASE("a corpus the learner nails exactly is reported, not failed") {
  const std::vector<CorpusMember> corpus = {
      {"const", [](std::span<const double>) { return 0.75; }}};
  const std::vector<std::uint64_t> m_list = {16, 32, 64, 128, 256};
  const OptimalityReport rep = optimality_report(space(1.0, 1), corpus, m_list);
  CHECK(rep.degenerate_all_zero);
  CHECK(rep.pass);
}
