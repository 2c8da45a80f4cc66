#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "iex/errors.hpp"
#include "iex/rng.hpp"

namespace iex {

using Point = std::vector<double>;

/// Relative tolerance for homogeneity / unit-sphere checks.
inline constexpr double kRelTol = 1e-9;
/// Absolute floor under all relative tolerances.
inline constexpr double kAbsFloor = 1e-12;
/// Cone-membership tolerance for expression losses (built-ins have exact
/// zero sets).
inline constexpr double kConeTol = 1e-12;

void check_point(const Point& x);

struct PolarPoint {
  double tau;   // radial part, in units of the gauge
  Point theta;  // angular part, on {gauge = 1}
};

/// A nonnegative 1-homogeneous loss f; its zero set is the exceptional
/// cone D.  Built-in families use the positive-part convention
/// x+ = max(x, 0), so they are defined on all of R^d and vanish off the
/// positive orthant (euclidean is the exception, vanishing only at 0).
class LossFunction {
 public:
  enum class Kind {
    Harmonic,       // (sum 1/xi+)^-1
    Euclidean,      // l2 norm
    WeightedSum,    // sum wi xi+
    LpNorm,         // lp norm of positive parts
    Min,            // min xi+
    GeometricMean,  // (prod xi+)^(1/d); for d=2 this is sqrt(x1 x2)
    Expression,     // parsed expression tree
  };

  static LossFunction harmonic(int d);
  static LossFunction euclidean(int d);
  static LossFunction weighted_sum(std::vector<double> weights);
  static LossFunction lp_norm(int d, double p);
  static LossFunction min_loss(int d);
  static LossFunction geometric_mean(int d);
  static LossFunction expression(std::function<double(std::span<const double>)> eval, int d,
                                 std::string text);

  double operator()(const Point& x) const;
  int dimension() const { return dim_; }
  Kind kind() const { return kind_; }
  const std::string& describe() const { return name_; }

  /// Cone membership: exact zero for built-ins, |f| < kConeTol for
  /// expressions.
  bool in_cone(const Point& x) const;

 private:
  LossFunction(Kind kind, int dim, std::string name,
               std::function<double(std::span<const double>)> eval);

  Kind kind_;
  int dim_;
  std::string name_;
  std::function<double(std::span<const double>)> eval_;
};

double eval_loss(const LossFunction& f, const Point& x);

/// (tau, theta) with tau = gauge(x), theta = x / tau.  Throws ConeError when
/// gauge(x) = 0.
PolarPoint polar_decompose(const LossFunction& gauge, const Point& x);

/// Inverse map tau * theta; rejects angular parts off the unit sphere.
Point polar_compose(const LossFunction& gauge, const PolarPoint& p);

struct HomogeneityVerdict {
  bool pass = true;
  Point witness_x;
  double witness_lambda = 0.0;
  double violation = 0.0;  // |f(lambda x) - lambda f(x)| at the witness
};

/// Randomized probe check of f(lambda x) = lambda f(x), lambda in (0.1, 10).
HomogeneityVerdict assert_homogeneous(const LossFunction& f, int probes, RngStream& rng);

struct NonnegativityVerdict {
  bool pass = true;
  Point witness_x;
  double value = 0.0;
};

NonnegativityVerdict assert_nonnegative(const LossFunction& f, int probes, RngStream& rng);

}  // namespace iex
