#include "iex/models.hpp"

#include <cmath>

namespace iex {

PointSampler pareto_model(std::vector<double> alphas) {
  const int d = static_cast<int>(alphas.size());
  for (double a : alphas) {
    if (!(a > 0.0)) throw Error("Pareto exponents must be positive");
  }
  return PointSampler{d, "pareto",
                      [alphas = std::move(alphas)](RngStream& rng) {
                        return sample_pareto_vector(alphas, rng);
                      }};
}

PointSampler gaussian_copula_model(double rho) {
  if (!(rho > -1.0 && rho < 1.0)) throw Error("copula correlation must lie in (-1, 1)");
  const double comp = std::sqrt(1.0 - rho * rho);
  return PointSampler{2, "gaussian-copula", [rho, comp](RngStream& rng) {
                        const double z1 = rng.normal();
                        const double z2 = rho * z1 + comp * rng.normal();
                        // survival function of the standard normal
                        const auto sf = [](double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); };
                        return Point{1.0 / sf(z1), 1.0 / sf(z2)};
                      }};
}

PointSampler limit_law_model(std::shared_ptr<const ImplicitMaxStableLaw> law) {
  const int d = law->loss().dimension();
  return PointSampler{d, "limit-law", [law](RngStream& rng) { return law->sample(rng); }};
}

PointSampler uniform01_model() {
  return PointSampler{1, "uniform01", [](RngStream& rng) { return Point{rng.uniform()}; }};
}

PointSampler breiman_model(double alpha, BreimanFactor v) {
  if (!(alpha > 0.0)) throw Error("Breiman radial exponent must be positive");
  int d = 0;
  if (v.kind == BreimanFactor::Kind::Box) {
    if (v.low.size() != v.high.size() || v.low.empty())
      throw Error("Breiman box factor needs matching low/high bounds");
    d = static_cast<int>(v.low.size());
  } else {
    if (v.point.empty()) throw Error("Breiman fixed factor needs a point");
    d = static_cast<int>(v.point.size());
  }
  return PointSampler{d, "breiman", [alpha, v = std::move(v)](RngStream& rng) {
                        const double z = std::pow(rng.uniform(), -1.0 / alpha);
                        Point x;
                        if (v.kind == BreimanFactor::Kind::Fixed) {
                          x = v.point;
                        } else {
                          x.resize(v.low.size());
                          for (std::size_t i = 0; i < x.size(); ++i)
                            x[i] = rng.uniform(v.low[i], v.high[i]);
                        }
                        for (double& c : x) c *= z;
                        return x;
                      }};
}

}  // namespace iex
