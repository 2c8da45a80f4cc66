#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "iex/geometry.hpp"
#include "iex/rng.hpp"

namespace iex {

struct FrechetLaw {
  double alpha;  // tail index, > 0
  double scale;  // > 0
};

/// exp(-(x/scale)^-alpha) for x > 0, else 0.
double frechet_cdf(const FrechetLaw& law, double x);

/// Inverse CDF at u in (0,1): scale * (-ln u)^(-1/alpha).
double frechet_quantile(const FrechetLaw& law, double u);

double sample_frechet(const FrechetLaw& law, RngStream& rng);

/// (u_i^(-1/alpha_i))_i; the deterministic transform behind
/// sample_pareto_vector, exposed so tests can inject uniforms.
Point pareto_from_uniforms(std::span<const double> alphas, std::span<const double> uniforms);

Point sample_pareto_vector(const std::vector<double>& alphas, RngStream& rng);

struct DirichletLaw {
  std::vector<double> alphas;  // all > 0
};

/// Normalizes independent Gamma(alpha_i, 1) draws onto the simplex.
Point dirichlet_from_gammas(std::span<const double> gammas);

Point sample_dirichlet(const DirichletLaw& law, RngStream& rng);

/// Cumulative sums of standard exponentials; strictly increasing.
std::vector<double> epochs_from_exponentials(std::span<const double> exponentials);

std::vector<double> poisson_epochs(int m, RngStream& rng);

/// Finite measure sigma_S on the unit sphere {gauge = 1}, stored as a total
/// mass plus a sampler of the normalized law sigma_0.
struct SpectralMeasure {
  double total_mass;  // sigma_S(S), finite
  LossFunction gauge;
  std::function<Point(RngStream&)> angular_sampler;
  /// Density of sigma_0 on the simplex parameterization of S, when known.
  std::function<double(const Point& simplex_u)> simplex_density;
};

/// Draws theta ~ sigma_0 and checks gauge(theta) = 1 within tolerance.
Point sample_spectral(const SpectralMeasure& sm, RngStream& rng);

/// theta = (1/xi_1, ..., 1/xi_d) for a simplex point xi.
Point inverse_simplex(const Point& xi);

/// Spectral measure of independent alpha_i-Pareto coordinates under the
/// harmonic gauge: sigma_0 is the coordinate-wise inversion of
/// Dirichlet(alpha_1..alpha_d) and the total mass is
/// (prod alpha_i Gamma(alpha_i)) / (alpha Gamma(alpha)), alpha = sum alpha_i.
SpectralMeasure pareto_dirichlet_spectral(const std::vector<double>& alphas);

/// Same angular law with total mass forced to 1 (the probability-spectral
/// base used for tilting).
SpectralMeasure pareto_dirichlet_spectral_normalized(const std::vector<double>& alphas);

double pareto_dirichlet_total_mass(const std::vector<double>& alphas);

}  // namespace iex
