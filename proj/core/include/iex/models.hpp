#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "iex/limit_laws.hpp"

namespace iex {

/// A seeded iid point source.
struct PointSampler {
  int dimension;
  std::string name;
  std::function<Point(RngStream&)> draw;
};

/// Independent standard alpha_i-Pareto coordinates.
PointSampler pareto_model(std::vector<double> alphas);

/// Unit-Pareto margins coupled by a bivariate Gaussian copula with
/// correlation rho; hidden regular variation of index 2/(1+rho) on the
/// open orthant.
PointSampler gaussian_copula_model(double rho);

/// Draws from an implicit max-stable law (the exact fixed point).
PointSampler limit_law_model(std::shared_ptr<const ImplicitMaxStableLaw> law);

/// d = 1 Uniform(0,1); the exactly solvable case of the finite-n identity.
PointSampler uniform01_model();

/// The multiplicative factor V of a Breiman product X = Z V.
struct BreimanFactor {
  enum class Kind { Box, Fixed };
  Kind kind = Kind::Box;
  Point low, high;  // Box: iid Uniform(low_i, high_i) coordinates
  Point point;      // Fixed: deterministic V
};

/// X = Z V with Z standard alpha-Pareto independent of V.
PointSampler breiman_model(double alpha, BreimanFactor v);

}  // namespace iex
