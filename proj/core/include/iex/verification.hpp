#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "iex/implicit_sampling.hpp"

namespace iex {

/// The unit of acceptance evidence.
struct GofReport {
  std::string test_name;
  std::size_t n = 0;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::string notes;
};

GofReport make_gof_report(std::string test_name, std::size_t n, double statistic,
                          double threshold, std::uint64_t seed, std::string notes = "");

/// One-sample Kolmogorov-Smirnov sup-distance, evaluated from both sides of
/// every step of the empirical CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Fixed 1% critical values (descriptive use, no p-value machinery).
double ks_critical(std::size_t n);
double ks_two_sample_critical(std::size_t n, std::size_t m);

/// Chi-square statistic of equiprobable bins against Uniform(0,1).
double chi_square_uniform(const std::vector<double>& sample, int bins);
/// 1% critical value for bins-1 degrees of freedom (Wilson-Hilferty).
double chi_square_critical(int bins);

struct EmpiricalAngularLaw {
  double threshold_u = 0.0;
  std::size_t exceedances = 0;
  std::vector<double> bin_edges;              // shared edges on (0,1)
  std::vector<std::vector<double>> masses;    // one histogram per coordinate
};

/// Simplex coordinates of the angular part: u_j = tau/x_j for the harmonic
/// gauge, normalized positive parts otherwise.
std::vector<double> simplex_coordinates(const LossFunction& gauge, const Point& x);

/// Histogram of the angular parts of the samples exceeding tau > u; the
/// empirical version of the limiting conditional angular law.
EmpiricalAngularLaw angular_conditional_estimate(const std::vector<Point>& samples,
                                                 const LossFunction& gauge, double u, int bins);

struct FiniteNCheck {
  double lhs = 0.0;  // empirical P(X_k(n) in A)
  double rhs = 0.0;  // n E[1_A(X) G(f(X))^(n-1)] with the pilot CDF
  double lhs_se = 0.0;
  double rhs_se = 0.0;
  bool pass = false;
};

/// Monte Carlo check of the exact finite-n selection identity.  The pilot
/// CDF of f(X) is estimated from an independent sample of size 10 N; passes
/// when |lhs - rhs| < 4 combined standard errors.  Throws when the loss
/// distribution looks discrete (duplicate pilot losses), which violates the
/// identity's continuity hypothesis.
FiniteNCheck finite_n_density_check(const PointSampler& model, const LossFunction& f,
                                    std::size_t n, const std::function<bool(const Point&)>& event,
                                    std::size_t num_blocks, RngStream& rng);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
  std::vector<double> refinements;  // values at successive tolerance levels
};

/// Adaptive 2-D quadrature of the limit density over (0,inf)^2 through the
/// substitution u_i = 1/x_i; equals 1 for every valid d = 2 law.
QuadratureResult normalization_quadrature(const std::vector<double>& alphas,
                                          const LossFunction& f, double alpha, double c);

/// The same integral truncated to the box x in (0, box_side]^2; grows
/// without bound for losses whose normalization diverges.
double truncated_normalization_mass(const std::vector<double>& alphas, const LossFunction& f,
                                    double alpha, double c, double box_side);

/// Hill estimator over the top k+1 order statistics.
double hill_tail_index(std::vector<double> sample, std::size_t k);

/// Default k = round(n^0.6), the usual bias/variance compromise.
std::size_t hill_default_k(std::size_t n);

}  // namespace iex
