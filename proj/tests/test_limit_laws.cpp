#include "iex/limit_laws.hpp"

#include <cmath>

#include "doctest.h"
#include "iex/errors.hpp"
#include "iex/verification.hpp"

using namespace iex;

namespace {

ImplicitMaxStableLaw harmonic_law(std::vector<double> alphas, int mc = 10000) {
  double alpha = 0.0;
  for (double a : alphas) alpha += a;
  RngStream rng(1, 0xC);
  return ImplicitMaxStableLaw::create(LossFunction::harmonic(static_cast<int>(alphas.size())), alpha,
                                      pareto_dirichlet_spectral(alphas), mc, rng);
}

}  // namespace

TEST_CASE("normalizing constant is analytic when the loss is the gauge") {
  const auto law = harmonic_law({1.0, 1.0});
  CHECK(law.normalizing_c() == doctest::Approx(0.5));
  CHECK(law.loss_is_gauge());
  CHECK(law.alpha() == doctest::Approx(2.0));
}

TEST_CASE("monte carlo normalizing constant agrees with the exact one") {
  // min loss over the (1,1) Pareto spectral law: nu{min > 1} = 1 exactly,
  // and f^2 is bounded by 4 on the sphere so the sentinel stays quiet
  RngStream rng(3, 0xC);
  const auto sm = pareto_dirichlet_spectral({1.0, 1.0});
  const auto est = normalizing_constant(LossFunction::min_loss(2), 2.0, sm, 400000, rng);
  CHECK_FALSE(est.diverged);
  CHECK_FALSE(est.analytic);
  CHECK(est.value == doctest::Approx(1.0).epsilon(0.01));
  const auto quad = normalization_quadrature({1.0, 1.0}, LossFunction::min_loss(2), 2.0, 1.0);
  CHECK(quad.converged);
  CHECK(quad.value == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("geometric mean loss diverges") {
  RngStream rng(4, 0xC);
  const auto sm = pareto_dirichlet_spectral({1.0, 1.0});
  CHECK_THROWS_AS(ImplicitMaxStableLaw::create(LossFunction::geometric_mean(2), 2.0, sm, 50000, rng),
                  DivergenceError);
}

TEST_CASE("pareto dirichlet primitives") {
  const Point w = pareto_dirichlet_from_primitives(2.0, {0.25, 0.75});
  CHECK(w[0] == doctest::Approx(8.0));
  CHECK(w[1] == doctest::Approx(8.0 / 3.0));
}

TEST_CASE("harmonic f of W equals Z exactly") {
  for (double z : {0.5, 1.0, 2.0, 7.0}) {
    const Point w = pareto_dirichlet_from_primitives(z, {0.3, 0.7});
    CHECK(LossFunction::harmonic(2)(w) == doctest::Approx(z));
  }
}

TEST_CASE("from primitives at the symmetric angle") {
  // Z = 2, Theta = (2,2): Y = C^(1/alpha) Z Theta = sqrt(1/2) * 2 * (2,2)
  const auto law = harmonic_law({1.0, 1.0});
  const Point y = law.from_primitives(2.0, {2.0, 2.0});
  CHECK(y[0] == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(y[1] == doctest::Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("doubling the loss scales C by two to the alpha") {
  const auto min2 = LossFunction::expression(
      [](std::span<const double> x) {
        return 2.0 * std::max(std::min(x[0], x[1]), 0.0);
      },
      2, "2 * min(pos(x1), pos(x2))");
  RngStream rng(6, 0xC);
  const auto sm = pareto_dirichlet_spectral({1.0, 1.0});
  const auto est = normalizing_constant(min2, 2.0, sm, 400000, rng);
  CHECK_FALSE(est.diverged);
  CHECK(est.value == doctest::Approx(4.0).epsilon(0.01));  // 2^alpha * C(min), C(min) = 1
}

TEST_CASE("limit law from primitives lands f on the frechet radial") {
  const auto law = harmonic_law({1.0, 1.0});
  const Point theta{4.0, 4.0 / 3.0};
  const double z = 1.7;
  const Point y = law.from_primitives(z, theta);
  // g(theta) = C^(-1/alpha) on the sphere, so f(y) = z C^(1/alpha)
  CHECK(law.loss()(y) == doctest::Approx(z * std::sqrt(0.5)));
}

TEST_CASE("order statistics from primitives") {
  const auto law = harmonic_law({1.0, 1.0});
  const std::vector<double> gammas{0.5, 2.0};
  const std::vector<Point> thetas{{2.0, 2.0}, {4.0, 4.0 / 3.0}};
  const auto os = law.order_stats_from_primitives(gammas, thetas);
  REQUIRE(os.radials.size() == 2);
  CHECK(os.radials[0] == doctest::Approx(1.0));
  CHECK(os.radials[1] == doctest::Approx(0.5));
  CHECK(os.points[0][0] == doctest::Approx(2.0));
  CHECK(os.points[0][1] == doctest::Approx(2.0));
  CHECK(os.points[1][0] == doctest::Approx(2.0));
  CHECK(os.points[1][1] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("limit density closed form") {
  const auto f = LossFunction::harmonic(2);
  CHECK(limit_density_at({1.0, 1.0}, f, 2.0, 0.5, {2.0, 2.0}) ==
        doctest::Approx(std::exp(-0.5) / 16.0));
  CHECK_THROWS_AS(limit_density_at({1.0, 1.0}, f, 2.0, 0.5, {2.0, -1.0}), ConeError);
  // the essential singularity of the exponential factor wins near the cone
  CHECK(limit_density_at({1.0, 1.0}, f, 2.0, 0.5, {1e-3, 2.0}) < 1e-100);
}

TEST_CASE("pareto dirichlet sampler agrees with the standard limit law") {
  // W = Z/xi is the mass-one (C = 1) law; compare coordinates
  const auto sm = pareto_dirichlet_spectral_normalized({1.0, 1.0});
  RngStream crng(7, 0xC);
  const auto law = ImplicitMaxStableLaw::create(LossFunction::harmonic(2), 2.0, sm, 10000, crng);
  RngStream rng_w(7, 1), rng_y(7, 2);
  std::vector<double> w0(100000), y0(100000);
  for (std::size_t i = 0; i < w0.size(); ++i) {
    w0[i] = sample_pareto_dirichlet({1.0, 1.0}, rng_w)[0];
    y0[i] = law.sample(rng_y)[0];
  }
  CHECK(ks_two_sample(w0, y0) < 0.01);
}

TEST_CASE("tilted capped-loss estimate matches direct sampling") {
  const auto sm = pareto_dirichlet_spectral_normalized({1.0, 1.0});
  RngStream crng(8, 0xC);
  const auto law = ImplicitMaxStableLaw::create(LossFunction::harmonic(2), 2.0, sm, 10000, crng);
  const auto f = law.loss();
  const auto h = [f](const Point& x) { return std::min(f(x), 10.0); };
  RngStream trng(8, 1);
  const auto tilted = tilt_expectation(law, h, 200000, trng);
  RngStream drng(8, 2);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double v = h(law.sample(drng));
    sum += v;
    sq += v * v;
  }
  const double direct = sum / n;
  const double direct_se = std::sqrt((sq / n - direct * direct) / n);
  // overlapping 99% intervals
  CHECK(std::fabs(tilted.value - direct) <= 2.5758 * (tilted.std_error + direct_se));
}

TEST_CASE("tilt of the unit functional is exactly one") {
  const auto sm = pareto_dirichlet_spectral_normalized({1.0, 1.0});
  RngStream crng(5, 0xC);
  const auto law = ImplicitMaxStableLaw::create(LossFunction::harmonic(2), 2.0, sm, 10000, crng);
  RngStream rng(5, 1);
  const auto est = tilt_expectation(law, [](const Point&) { return 1.0; }, 20000, rng);
  CHECK(est.value == doctest::Approx(1.0));
}

// ---- distributional checks, fixed seeds ----

TEST_CASE("radial part of the exact sampler is frechet") {
  const auto law = harmonic_law({1.0, 1.0});
  RngStream rng(41, 1);
  std::vector<double> fs(100000);
  for (auto& v : fs) v = law.loss()(law.sample(rng));
  const FrechetLaw radial{2.0, std::sqrt(0.5)};
  const double ks = ks_statistic(fs, [&](double x) { return frechet_cdf(radial, x); });
  CHECK(ks < 0.006);
}

TEST_CASE("angular part of the exact sampler is dirichlet") {
  // for loss = gauge the tilt is flat, so the angular law stays sigma_0:
  // simplex coordinates of Theta ~ Dirichlet(1,1), i.e. uniform
  const auto law = harmonic_law({1.0, 1.0});
  RngStream rng(42, 1);
  std::vector<double> us(100000);
  for (auto& v : us) {
    const Point y = law.sample(rng);
    v = simplex_coordinates(law.loss(), y)[0];
  }
  const double ks = ks_statistic(us, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(ks < 0.006);
}

TEST_CASE("W equals Z over xi") {
  RngStream rng(43, 1);
  std::vector<double> fs(100000);
  const auto f = LossFunction::harmonic(2);
  for (auto& v : fs) v = f(sample_pareto_dirichlet({1.0, 1.0}, rng));
  // f(W) = Z * (sum xi_i) = Z, standard 2-Frechet
  const FrechetLaw radial{2.0, 1.0};
  const double ks = ks_statistic(fs, [&](double x) { return frechet_cdf(radial, x); });
  CHECK(ks < 0.006);
}

TEST_CASE("rejection sampler handles a non-gauge loss") {
  // min loss over the (1,1) Pareto spectral law; f(Y) must still be
  // Frechet(alpha, C^(1/alpha)) with C = 1
  RngStream crng(44, 0xC);
  const auto sm = pareto_dirichlet_spectral({1.0, 1.0});
  const auto law = ImplicitMaxStableLaw::create(LossFunction::min_loss(2), 2.0, sm,
                                                400000, crng);
  CHECK_FALSE(law.loss_is_gauge());
  RngStream rng(44, 1);
  std::vector<double> fs(50000);
  for (auto& v : fs) v = law.loss()(law.sample(rng));
  const FrechetLaw radial{2.0, std::pow(law.normalizing_c(), 0.5)};
  const double ks = ks_statistic(fs, [&](double x) { return frechet_cdf(radial, x); });
  CHECK(ks < 0.01);
}

TEST_CASE("order statistic ratios are uniform") {
  const auto law = harmonic_law({1.0, 1.0});
  RngStream rng(45, 1);
  std::vector<double> ratios(100000);
  for (auto& v : ratios) {
    const auto os = law.sample_order_stats(2, rng);
    v = std::pow(os.radials[1] / os.radials[0], 2.0);  // Gamma_1 / Gamma_2
  }
  const double ks = ks_statistic(ratios, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(ks < 0.006);
}
