#include "iex/distributions.hpp"

#include <cmath>
#include <numeric>

namespace iex {

double frechet_cdf(const FrechetLaw& law, double x) {
  if (x <= 0.0) return 0.0;
  return std::exp(-std::pow(x / law.scale, -law.alpha));
}

double frechet_quantile(const FrechetLaw& law, double u) {
  return law.scale * std::pow(-std::log(u), -1.0 / law.alpha);
}

double sample_frechet(const FrechetLaw& law, RngStream& rng) {
  return frechet_quantile(law, rng.uniform());
}

Point pareto_from_uniforms(std::span<const double> alphas, std::span<const double> uniforms) {
  Point x(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i)
    x[i] = std::pow(uniforms[i], -1.0 / alphas[i]);
  return x;
}

Point sample_pareto_vector(const std::vector<double>& alphas, RngStream& rng) {
  Point u(alphas.size());
  for (double& v : u) v = rng.uniform();
  return pareto_from_uniforms(alphas, u);
}

Point dirichlet_from_gammas(std::span<const double> gammas) {
  const double total = std::accumulate(gammas.begin(), gammas.end(), 0.0);
  Point xi(gammas.size());
  for (std::size_t i = 0; i < gammas.size(); ++i) xi[i] = gammas[i] / total;
  return xi;
}

Point sample_dirichlet(const DirichletLaw& law, RngStream& rng) {
  Point g(law.alphas.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = rng.gamma(law.alphas[i]);
  return dirichlet_from_gammas(g);
}

std::vector<double> epochs_from_exponentials(std::span<const double> exponentials) {
  std::vector<double> epochs(exponentials.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < exponentials.size(); ++i) {
    acc += exponentials[i];
    epochs[i] = acc;
  }
  return epochs;
}

std::vector<double> poisson_epochs(int m, RngStream& rng) {
  if (m < 1) throw Error("poisson_epochs needs m >= 1");
  std::vector<double> e(static_cast<std::size_t>(m));
  for (double& v : e) v = rng.exponential();
  return epochs_from_exponentials(e);
}

Point sample_spectral(const SpectralMeasure& sm, RngStream& rng) {
  if (!(sm.total_mass > 0.0)) throw Error("spectral measure has zero total mass");
  Point theta = sm.angular_sampler(rng);
  const double g = sm.gauge(theta);
  if (std::fabs(g - 1.0) > kRelTol * std::max(1.0, std::fabs(g)))
    throw Error("spectral sampler produced a point off the unit sphere");
  return theta;
}

Point inverse_simplex(const Point& xi) {
  Point theta(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) theta[i] = 1.0 / xi[i];
  return theta;
}

double pareto_dirichlet_total_mass(const std::vector<double>& alphas) {
  const double alpha = std::accumulate(alphas.begin(), alphas.end(), 0.0);
  double log_mass = -std::log(alpha) - std::lgamma(alpha);
  for (double a : alphas) log_mass += std::log(a) + std::lgamma(a);
  return std::exp(log_mass);
}

namespace {
SpectralMeasure make_pd_spectral(const std::vector<double>& alphas, double mass) {
  for (double a : alphas) {
    if (!(a > 0.0)) throw Error("Dirichlet parameters must be positive");
  }
  const int d = static_cast<int>(alphas.size());
  DirichletLaw dir{alphas};
  SpectralMeasure sm{
      mass,
      LossFunction::harmonic(d),
      [dir](RngStream& rng) { return inverse_simplex(sample_dirichlet(dir, rng)); },
      nullptr,
  };
  // sigma_0 density in simplex coordinates: the Dirichlet pdf itself.
  const double alpha = std::accumulate(alphas.begin(), alphas.end(), 0.0);
  double log_norm = std::lgamma(alpha);
  for (double a : alphas) log_norm -= std::lgamma(a);
  sm.simplex_density = [alphas, log_norm](const Point& u) {
    double log_p = log_norm;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i] <= 0.0) return 0.0;
      log_p += (alphas[i] - 1.0) * std::log(u[i]);
    }
    return std::exp(log_p);
  };
  return sm;
}
}  // namespace

SpectralMeasure pareto_dirichlet_spectral(const std::vector<double>& alphas) {
  return make_pd_spectral(alphas, pareto_dirichlet_total_mass(alphas));
}

SpectralMeasure pareto_dirichlet_spectral_normalized(const std::vector<double>& alphas) {
  return make_pd_spectral(alphas, 1.0);
}

}  // namespace iex
