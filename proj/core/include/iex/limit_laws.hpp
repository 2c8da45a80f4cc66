#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "iex/distributions.hpp"
#include "iex/geometry.hpp"

namespace iex {

struct NormalizationEstimate {
  double value = 0.0;
  double std_error = 0.0;
  bool analytic = false;
  bool diverged = false;
  std::string note;
};

/// C = integral over S of f(theta)^alpha dsigma_S.  Analytic shortcut when
/// the loss is the gauge itself (then C = sigma_S(S) exactly); Monte Carlo
/// with a divergence sentinel otherwise: the running mean must stay below
/// 1e6 and its relative change over the last decade of samples must fall
/// under 1e-3, or the law is rejected.
NormalizationEstimate normalizing_constant(const LossFunction& f, double alpha,
                                           const SpectralMeasure& spectral, int mc_size,
                                           RngStream& rng);

struct LimitOrderSample {
  std::vector<Point> points;     // c^(1/alpha) Gamma_i^(-1/alpha) Theta_i
  std::vector<double> radials;   // strictly decreasing
  std::vector<Point> angulars;
};

/// The limit law of normalized implicit maxima: radial part Frechet with
/// scale C^(1/alpha), angular part the tilted spectral law.
class ImplicitMaxStableLaw {
 public:
  /// Computes C (analytic when the loss coincides with the gauge on S,
  /// Monte Carlo otherwise).  Throws DivergenceError when the normalizing
  /// integral does not stabilize.
  static ImplicitMaxStableLaw create(LossFunction loss, double alpha, SpectralMeasure spectral,
                                     int mc_size, RngStream& rng);

  double alpha() const { return alpha_; }
  double normalizing_c() const { return c_; }
  double c_std_error() const { return c_std_error_; }
  const LossFunction& loss() const { return loss_; }
  const SpectralMeasure& spectral() const { return spectral_; }
  bool loss_is_gauge() const { return loss_is_gauge_; }

  /// Tilt function g(theta) = C^(-1/alpha) f(theta).
  double tilt(const Point& theta) const;

  /// Z Theta / g(Theta) with Z standard alpha-Frechet and Theta from the
  /// tilted angular law sigma_g; f of the output is Frechet(alpha,
  /// C^(1/alpha)).
  Point sample(RngStream& rng) const;

  /// Deterministic core of sample() for injected primitives.
  Point from_primitives(double frechet_z, const Point& theta) const;

  /// Poisson-representation order statistics sampler (requires loss == gauge):
  /// points c^(1/alpha) Gamma_i^(-1/alpha) Theta_i with iid Theta_i ~
  /// sigma_0 and Poisson epochs Gamma.
  LimitOrderSample sample_order_stats(int m, RngStream& rng) const;

  LimitOrderSample order_stats_from_primitives(std::span<const double> gammas,
                                               const std::vector<Point>& thetas) const;

 private:
  ImplicitMaxStableLaw(LossFunction loss, double alpha, SpectralMeasure spectral, double c,
                       double c_se, bool analytic, bool loss_is_gauge);

  Point sample_tilted_angular(RngStream& rng) const;

  LossFunction loss_;
  double alpha_;
  SpectralMeasure spectral_;
  double c_;
  double c_std_error_;
  bool c_analytic_;
  bool loss_is_gauge_;
  double rejection_bound_;  // envelope for sampling sigma_g when loss != gauge
};

/// W = Z / xi coordinate-wise: the standard implicit max-stable law of
/// independent Pareto coordinates under the harmonic loss.  Z is standard
/// (sum alpha_i)-Frechet, xi ~ Dirichlet(alpha_1..alpha_d).
Point sample_pareto_dirichlet(const std::vector<double>& alphas, RngStream& rng);

Point pareto_dirichlet_from_primitives(double frechet_z, const Point& xi);

struct TiltEstimate {
  double value = 0.0;
  double std_error = 0.0;
  bool variance_warning = false;
};

/// Importance-sampling estimator of E h(Y): draws (Z, Theta) from the base
/// spectral law sigma_0 and reweights by the tilt, so only the cheap base
/// angular law is ever sampled.
TiltEstimate tilt_expectation(const ImplicitMaxStableLaw& law,
                              const std::function<double(const Point&)>& h, int mc_size,
                              RngStream& rng);

/// Density of the d-dimensional Pareto-Dirichlet limit law at a strictly
/// positive x: exp(-C f(x)^-alpha) prod alpha_i x_i^(-alpha_i - 1).
double limit_density_at(const std::vector<double>& alphas, const LossFunction& f, double alpha,
                        double c, const Point& x);

}  // namespace iex
