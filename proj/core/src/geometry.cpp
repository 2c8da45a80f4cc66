#include "iex/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace iex {

void check_point(const Point& x) {
  for (double c : x) {
    if (!std::isfinite(c)) throw NonFiniteError("point has a non-finite coordinate");
  }
}

LossFunction::LossFunction(Kind kind, int dim, std::string name,
                           std::function<double(std::span<const double>)> eval)
    : kind_(kind), dim_(dim), name_(std::move(name)), eval_(std::move(eval)) {
  if (dim_ < 1) throw DimensionError("loss dimension must be >= 1");
}

LossFunction LossFunction::harmonic(int d) {
  return LossFunction(Kind::Harmonic, d, "harmonic", [](std::span<const double> x) {
    double s = 0.0;
    for (double c : x) {
      if (c <= 0.0) return 0.0;  // 1/x+ = inf forces f = 0
      s += 1.0 / c;
    }
    return 1.0 / s;
  });
}

LossFunction LossFunction::euclidean(int d) {
  return LossFunction(Kind::Euclidean, d, "euclidean", [](std::span<const double> x) {
    double s = 0.0;
    for (double c : x) s += c * c;
    return std::sqrt(s);
  });
}

LossFunction LossFunction::weighted_sum(std::vector<double> weights) {
  const int d = static_cast<int>(weights.size());
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error("weighted-sum loss needs nonnegative weights");
  }
  return LossFunction(Kind::WeightedSum, d, "weighted-sum",
                      [w = std::move(weights)](std::span<const double> x) {
                        double s = 0.0;
                        for (std::size_t i = 0; i < w.size(); ++i)
                          s += w[i] * std::max(x[i], 0.0);
                        return s;
                      });
}

LossFunction LossFunction::lp_norm(int d, double p) {
  if (!(p >= 1.0)) throw Error("lp-norm loss needs p >= 1");
  return LossFunction(Kind::LpNorm, d, "lp-norm", [p](std::span<const double> x) {
    double s = 0.0;
    for (double c : x) s += std::pow(std::max(c, 0.0), p);
    return std::pow(s, 1.0 / p);
  });
}

LossFunction LossFunction::min_loss(int d) {
  return LossFunction(Kind::Min, d, "min", [](std::span<const double> x) {
    double m = std::max(x[0], 0.0);
    for (double c : x) m = std::min(m, std::max(c, 0.0));
    return m;
  });
}

LossFunction LossFunction::geometric_mean(int d) {
  return LossFunction(Kind::GeometricMean, d, "geometric-mean", [d](std::span<const double> x) {
    double p = 1.0;
    for (double c : x) {
      if (c <= 0.0) return 0.0;
      p *= c;
    }
    return std::pow(p, 1.0 / d);
  });
}

LossFunction LossFunction::expression(std::function<double(std::span<const double>)> eval, int d,
                                      std::string text) {
  return LossFunction(Kind::Expression, d, std::move(text), std::move(eval));
}

double LossFunction::operator()(const Point& x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw DimensionError("loss expects dimension " + std::to_string(dim_) + ", got " +
                         std::to_string(x.size()));
  check_point(x);
  return eval_(std::span<const double>(x.data(), x.size()));
}

bool LossFunction::in_cone(const Point& x) const {
  const double v = (*this)(x);
  if (kind_ == Kind::Expression) return std::fabs(v) < kConeTol;
  return v == 0.0;
}

double eval_loss(const LossFunction& f, const Point& x) { return f(x); }

PolarPoint polar_decompose(const LossFunction& gauge, const Point& x) {
  const double tau = gauge(x);
  if (gauge.in_cone(x) || !(tau > 0.0))
    throw ConeError("point lies in the exceptional cone {gauge = 0}");
  Point theta(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) theta[i] = x[i] / tau;
  return PolarPoint{tau, std::move(theta)};
}

Point polar_compose(const LossFunction& gauge, const PolarPoint& p) {
  if (!(p.tau > 0.0) || !std::isfinite(p.tau)) throw Error("radial part must be positive and finite");
  const double g = gauge(p.theta);
  if (std::fabs(g - 1.0) > kRelTol * std::max(1.0, std::fabs(g)))
    throw Error("angular part is not on the unit sphere {gauge = 1}");
  Point x(p.theta.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = p.tau * p.theta[i];
  return x;
}

HomogeneityVerdict assert_homogeneous(const LossFunction& f, int probes, RngStream& rng) {
  if (probes < 1) throw Error("probes must be >= 1");
  HomogeneityVerdict v;
  const int d = f.dimension();
  Point x(d);
  for (int k = 0; k < probes; ++k) {
    for (int i = 0; i < d; ++i) x[i] = rng.uniform(-3.0, 3.0);
    const double lambda = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    Point lx(d);
    for (int i = 0; i < d; ++i) lx[i] = lambda * x[i];
    const double lhs = f(lx);
    const double rhs = lambda * f(x);
    const double err = std::fabs(lhs - rhs);
    if (err > kRelTol * std::max(1.0, std::fabs(rhs))) {
      v.pass = false;
      v.witness_x = x;
      v.witness_lambda = lambda;
      v.violation = err;
      return v;
    }
  }
  return v;
}

NonnegativityVerdict assert_nonnegative(const LossFunction& f, int probes, RngStream& rng) {
  NonnegativityVerdict v;
  const int d = f.dimension();
  Point x(d);
  for (int k = 0; k < probes; ++k) {
    for (int i = 0; i < d; ++i) x[i] = rng.uniform(-3.0, 3.0);
    const double val = f(x);
    if (!(val >= 0.0) || !std::isfinite(val)) {
      v.pass = false;
      v.witness_x = x;
      v.value = val;
      return v;
    }
  }
  return v;
}

}  // namespace iex
