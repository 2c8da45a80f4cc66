#include "iex/verification.hpp"

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "iex/errors.hpp"

using namespace iex;

namespace {
double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }
}  // namespace

TEST_CASE("ks statistic by hand") {
  // sorted sample 0.1, 0.5, 0.9 against U(0,1): sup distance 7/30 at the
  // lower side of the first step
  CHECK(ks_statistic({0.5, 0.1, 0.9}, uniform_cdf) == doctest::Approx(7.0 / 30.0));
  CHECK(ks_statistic({0.5}, uniform_cdf) == doctest::Approx(0.5));
}

TEST_CASE("ks at exact quantiles and off support") {
  // sample at k/(n+1): the sup distance is exactly 1/(n+1)
  std::vector<double> q(9);
  for (int k = 1; k <= 9; ++k) q[static_cast<std::size_t>(k - 1)] = k / 10.0;
  CHECK(ks_statistic(q, uniform_cdf) == doctest::Approx(0.1));
  CHECK(ks_statistic({5.0}, uniform_cdf) == doctest::Approx(1.0));
}

TEST_CASE("two sample ks by hand") {
  CHECK(ks_two_sample({1.0, 2.0}, {1.5, 2.5}) == doctest::Approx(0.5));
  CHECK(ks_two_sample({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == doctest::Approx(0.0));
}

TEST_CASE("critical values") {
  CHECK(ks_critical(100) == doctest::Approx(0.163));
  CHECK(ks_two_sample_critical(100, 100) == doctest::Approx(1.63 * std::sqrt(0.02)));
  // Wilson-Hilferty at 9 degrees of freedom
  CHECK(chi_square_critical(10) == doctest::Approx(21.6956).epsilon(1e-3));
}

TEST_CASE("chi square statistic on a hand sample") {
  // 4 points in 2 bins split 3/1: ((3-2)^2 + (1-2)^2)/2 = 1
  CHECK(chi_square_uniform({0.1, 0.2, 0.3, 0.8}, 2) == doctest::Approx(1.0));
}

TEST_CASE("chi square accepts uniform draws and rejects squared ones") {
  RngStream rng(201);
  std::vector<double> good(100000), bad(100000);
  for (auto& v : good) v = rng.uniform();
  for (auto& v : bad) {
    const double u = rng.uniform();
    v = u * u;
  }
  CHECK(chi_square_uniform(good, 10) < chi_square_critical(10));
  CHECK(chi_square_uniform(bad, 10) > chi_square_critical(10));
}

TEST_CASE("simplex coordinates under the harmonic gauge") {
  const auto gauge = LossFunction::harmonic(2);
  const auto u = simplex_coordinates(gauge, {4.0, 4.0 / 3.0});
  CHECK(u[0] == doctest::Approx(0.25));
  CHECK(u[1] == doctest::Approx(0.75));
  // scale invariant
  const auto u2 = simplex_coordinates(gauge, {8.0, 8.0 / 3.0});
  CHECK(u2[0] == doctest::Approx(0.25));
}

TEST_CASE("angular conditional estimate recovers the uniform simplex law") {
  const auto gauge = LossFunction::harmonic(2);
  RngStream rng(202);
  std::vector<Point> pts(200000);
  for (auto& p : pts) p = sample_pareto_vector({1.0, 1.0}, rng);
  const auto est = angular_conditional_estimate(pts, gauge, 5.0, 10);
  REQUIRE(est.exceedances > 100);
  for (double m : est.masses[0]) CHECK(m == doctest::Approx(0.1).epsilon(0.35));
  double total = 0.0;
  for (double m : est.masses[0]) total += m;
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("angular chi square at the 99th percentile threshold") {
  const auto gauge = LossFunction::harmonic(2);
  RngStream rng(206);
  const std::size_t n = 200000;
  std::vector<Point> pts(n);
  std::vector<double> taus;
  taus.reserve(n);
  for (auto& p : pts) {
    p = sample_pareto_vector({1.0, 1.0}, rng);
    taus.push_back(gauge(p));
  }
  std::nth_element(taus.begin(), taus.begin() + static_cast<std::ptrdiff_t>(0.99 * n), taus.end());
  const double u = taus[static_cast<std::size_t>(0.99 * n)];
  std::vector<double> coords;
  for (const auto& p : pts)
    if (gauge(p) > u) coords.push_back(simplex_coordinates(gauge, p).front());
  CHECK(chi_square_uniform(coords, 10) < chi_square_critical(10));
}

TEST_CASE("breiman angular law matches the weighted oracle") {
  // X = Z V: the limiting angular law reweights the law of V by tau^alpha(V)
  const double alpha = 2.0;
  BreimanFactor box;
  box.kind = BreimanFactor::Kind::Box;
  box.low = {1.0, 1.0};
  box.high = {2.0, 3.0};
  const auto model = breiman_model(alpha, box);
  const auto gauge = LossFunction::euclidean(2);
  RngStream rng(207);
  const std::size_t n = 400000;
  std::vector<Point> xs(n);
  std::vector<double> taus;
  taus.reserve(n);
  for (auto& p : xs) {
    p = model.draw(rng);
    taus.push_back(gauge(p));
  }
  std::nth_element(taus.begin(), taus.begin() + static_cast<std::ptrdiff_t>(0.99 * n), taus.end());
  const auto est = angular_conditional_estimate(xs, gauge, taus[static_cast<std::size_t>(0.99 * n)], 10);

  std::vector<double> oracle(10, 0.0);
  RngStream vrng(208);
  double wsum = 0.0;
  for (int i = 0; i < 400000; ++i) {
    const Point v{vrng.uniform(1.0, 2.0), vrng.uniform(1.0, 3.0)};
    const double w = std::pow(gauge(v), alpha);
    const double s = simplex_coordinates(gauge, v).front();
    const int b = std::clamp(static_cast<int>(s * 10), 0, 9);
    oracle[static_cast<std::size_t>(b)] += w;
    wsum += w;
  }
  double tv = 0.0;
  for (std::size_t b = 0; b < 10; ++b) tv += std::fabs(est.masses[0][b] - oracle[b] / wsum);
  CHECK(tv / 2.0 < 0.05);
}

TEST_CASE("deterministic breiman factor puts all angular mass in one bin") {
  BreimanFactor fixed;
  fixed.kind = BreimanFactor::Kind::Fixed;
  fixed.point = {3.0, 4.0};
  const auto model = breiman_model(1.0, fixed);
  const auto gauge = LossFunction::euclidean(2);
  RngStream rng(209);
  std::vector<Point> xs(20000);
  for (auto& p : xs) p = model.draw(rng);
  const auto est = angular_conditional_estimate(xs, gauge, 50.0, 10);
  // simplex coordinates are (3/7, 4/7) for every draw
  CHECK(est.masses[0][4] == doctest::Approx(1.0));
  CHECK(est.masses[1][5] == doctest::Approx(1.0));
}

TEST_CASE("angular estimate needs enough exceedances") {
  const auto gauge = LossFunction::harmonic(2);
  RngStream rng(203);
  std::vector<Point> pts(500);
  for (auto& p : pts) p = sample_pareto_vector({1.0, 1.0}, rng);
  CHECK_THROWS_AS(angular_conditional_estimate(pts, gauge, 1e6, 10), Error);
}

TEST_CASE("finite n identity for uniform blocks") {
  // d = 1 Uniform(0,1), n = 2, event {x < 1/2}: both sides equal 1/4
  RngStream rng(204);
  const auto model = uniform01_model();
  const auto f = LossFunction::expression(
      [](std::span<const double> x) { return std::max(x[0], 0.0); }, 1, "pos(x1)");
  const auto chk = finite_n_density_check(
      model, f, 2, [](const Point& x) { return x[0] < 0.5; }, 40000, rng);
  CHECK(chk.pass);
  CHECK(chk.lhs == doctest::Approx(0.25).epsilon(0.05));
  CHECK(chk.rhs == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("single draw blocks reduce the identity to a plain probability") {
  RngStream rng(210);
  const auto f = LossFunction::expression(
      [](std::span<const double> x) { return std::max(x[0], 0.0); }, 1, "pos(x1)");
  const auto chk = finite_n_density_check(
      uniform01_model(), f, 1, [](const Point& x) { return x[0] < 0.3; }, 40000, rng);
  CHECK(chk.pass);
  CHECK(chk.lhs == doctest::Approx(0.3).epsilon(0.05));
  CHECK(chk.rhs == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("finite n identity for pareto blocks and a loss event") {
  RngStream rng(211);
  const auto model = pareto_model({1.0, 1.0});
  const auto f = LossFunction::harmonic(2);
  const auto chk = finite_n_density_check(
      model, f, 10, [&](const Point& x) { return f(x) > 2.0; }, 40000, rng);
  CHECK(chk.pass);
}

TEST_CASE("quadrature normalizes the harmonic law") {
  const auto f = LossFunction::harmonic(2);
  const auto quad = normalization_quadrature({1.0, 1.0}, f, 2.0, 0.5);
  CHECK(quad.converged);
  CHECK(quad.value == doctest::Approx(1.0).epsilon(1e-3));
  const auto skew = normalization_quadrature({1.0, 2.0}, f, 3.0,
                                             pareto_dirichlet_total_mass({1.0, 2.0}));
  CHECK(skew.converged);
  CHECK(skew.value == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("quadrature is invariant under loss rescaling") {
  // f -> 2f with C -> 2^alpha C leaves the density unchanged
  const auto doubled = LossFunction::expression(
      [](std::span<const double> x) {
        const double a = std::max(x[0], 0.0), b = std::max(x[1], 0.0);
        return (a == 0.0 || b == 0.0) ? 0.0 : 2.0 / (1.0 / a + 1.0 / b);
      },
      2, "2 / (1/pos(x1) + 1/pos(x2))");
  const auto quad = normalization_quadrature({1.0, 1.0}, doubled, 2.0, 2.0);
  CHECK(quad.converged);
  CHECK(quad.value == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("quadrature detects a wrong constant") {
  const auto f = LossFunction::harmonic(2);
  const auto quad = normalization_quadrature({1.0, 1.0}, f, 2.0, 0.1);
  CHECK(std::fabs(quad.value - 1.0) > 0.1);
}

TEST_CASE("truncated mass grows without bound for the geometric mean") {
  const auto f = LossFunction::geometric_mean(2);
  const double m1 = truncated_normalization_mass({1.0, 1.0}, f, 2.0, 1.0, 100.0);
  const double m2 = truncated_normalization_mass({1.0, 1.0}, f, 2.0, 1.0, 10000.0);
  CHECK(m2 > m1 + 5.0);  // ~ 2 ln(side) growth
  CHECK(m2 > 10.0);
  // a convergent law saturates near 1
  const auto h = LossFunction::harmonic(2);
  const double h2 = truncated_normalization_mass({1.0, 1.0}, h, 2.0, 0.5, 10000.0);
  CHECK(h2 == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("hill estimator on a deterministic grid") {
  // x_(i) = e^(5-i): each log spacing is 1, so the index estimate is 1/mean = 1
  CHECK(hill_tail_index({std::exp(1.0), std::exp(2.0), std::exp(3.0), std::exp(4.0)}, 3) ==
        doctest::Approx(1.0 / 2.0));
  CHECK(hill_tail_index({std::exp(2.0), std::exp(1.0), 1.0}, 1) == doctest::Approx(1.0));
  CHECK(hill_default_k(100000) == static_cast<std::size_t>(std::lround(std::pow(1e5, 0.6))));
}

TEST_CASE("hill estimator recovers a pareto index") {
  RngStream rng(205);
  std::vector<double> xs(200000);
  for (auto& v : xs) v = std::pow(rng.uniform(), -1.0 / 3.0);
  const double a = hill_tail_index(xs, hill_default_k(xs.size()));
  CHECK(a == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("gof report passes iff the statistic clears the threshold") {
  CHECK(make_gof_report("t", 10, 0.1, 0.2, 7).pass);
  CHECK_FALSE(make_gof_report("t", 10, 0.3, 0.2, 7).pass);
}
