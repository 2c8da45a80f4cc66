#include "iex/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace iex {

GofReport make_gof_report(std::string test_name, std::size_t n, double statistic,
                          double threshold, std::uint64_t seed, std::string notes) {
  GofReport r;
  r.test_name = std::move(test_name);
  r.n = n;
  r.statistic = statistic;
  r.threshold = threshold;
  r.pass = statistic <= threshold;
  r.seed = seed;
  r.notes = std::move(notes);
  return r;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw Error("ks_statistic needs a nonempty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(f - static_cast<double>(i + 1) / n));
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error("ks_two_sample needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    // consume every point tied at the current value before measuring, so
    // shared atoms contribute no spurious distance
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

double ks_two_sample_critical(std::size_t n, std::size_t m) {
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  return 1.63 * std::sqrt((dn + dm) / (dn * dm));
}

double chi_square_uniform(const std::vector<double>& sample, int bins) {
  if (sample.empty() || bins < 2) throw Error("chi_square_uniform needs data and >= 2 bins");
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  for (double u : sample) {
    const int b = std::clamp(static_cast<int>(u * bins), 0, bins - 1);
    counts[static_cast<std::size_t>(b)] += 1.0;
  }
  const double expected = static_cast<double>(sample.size()) / bins;
  double stat = 0.0;
  for (double c : counts) stat += (c - expected) * (c - expected) / expected;
  return stat;
}

double chi_square_critical(int bins) {
  // Wilson-Hilferty approximation at the 1% level.
  const double df = static_cast<double>(bins - 1);
  const double z = 2.3263478740408408;
  const double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
  return df * t * t * t;
}

std::vector<double> simplex_coordinates(const LossFunction& gauge, const Point& x) {
  std::vector<double> u(x.size());
  if (gauge.kind() == LossFunction::Kind::Harmonic) {
    const double tau = gauge(x);
    for (std::size_t j = 0; j < x.size(); ++j) u[j] = tau / x[j];
    return u;
  }
  double total = 0.0;
  for (double c : x) total += std::max(c, 0.0);
  if (!(total > 0.0)) throw ConeError("point has no positive part to parameterize");
  for (std::size_t j = 0; j < x.size(); ++j) u[j] = std::max(x[j], 0.0) / total;
  return u;
}

EmpiricalAngularLaw angular_conditional_estimate(const std::vector<Point>& samples,
                                                 const LossFunction& gauge, double u, int bins) {
  if (bins < 2) throw Error("angular histogram needs >= 2 bins");
  EmpiricalAngularLaw law;
  law.threshold_u = u;
  const std::size_t d = samples.empty() ? 0 : samples.front().size();
  law.masses.assign(d, std::vector<double>(static_cast<std::size_t>(bins), 0.0));
  for (int b = 0; b <= bins; ++b)
    law.bin_edges.push_back(static_cast<double>(b) / bins);

  std::size_t count = 0;
  for (const auto& x : samples) {
    if (gauge.in_cone(x)) continue;
    if (!(gauge(x) > u)) continue;
    const auto coords = simplex_coordinates(gauge, x);
    for (std::size_t j = 0; j < d; ++j) {
      const int b = std::clamp(static_cast<int>(coords[j] * bins), 0, bins - 1);
      law.masses[j][static_cast<std::size_t>(b)] += 1.0;
    }
    ++count;
  }
  if (count < 100) throw Error("too few threshold exceedances (" + std::to_string(count) + ")");
  law.exceedances = count;
  for (auto& hist : law.masses)
    for (double& m : hist) m /= static_cast<double>(count);
  return law;
}

FiniteNCheck finite_n_density_check(const PointSampler& model, const LossFunction& f,
                                    std::size_t n, const std::function<bool(const Point&)>& event,
                                    std::size_t num_blocks, RngStream& rng) {
  if (num_blocks < 1000) throw Error("finite_n_density_check needs at least 1e3 blocks");
  // Pilot CDF of f(X), independent of the evaluation samples.
  RngStream pilot_rng = rng.substream(0x917);
  const std::size_t pilot_size = 10 * num_blocks;
  std::vector<double> pilot(pilot_size);
  for (double& v : pilot) v = f(model.draw(pilot_rng));
  std::sort(pilot.begin(), pilot.end());
  for (std::size_t i = 1; i < pilot.size(); ++i) {
    if (pilot[i] == pilot[i - 1])
      throw Error("duplicate losses in the pilot sample; the loss distribution looks discrete");
  }
  const auto ecdf = [&pilot](double v) {
    const auto it = std::upper_bound(pilot.begin(), pilot.end(), v);
    return static_cast<double>(it - pilot.begin()) / static_cast<double>(pilot.size());
  };

  // lhs: direct simulation of the selected point.
  RngStream block_rng = rng.substream(0xB10C);
  double hits = 0.0;
  for (std::size_t b = 0; b < num_blocks; ++b) {
    double best_loss = -1.0;
    Point best;
    for (std::size_t i = 0; i < n; ++i) {
      Point x = model.draw(block_rng);
      const double v = f(x);
      if (v > best_loss) {
        best_loss = v;
        best = std::move(x);
      }
    }
    if (best_loss == 0.0) throw DegenerateBlockError("degenerate block in finite-n check");
    if (event(best)) hits += 1.0;
  }
  FiniteNCheck out;
  out.lhs = hits / static_cast<double>(num_blocks);
  out.lhs_se = std::sqrt(std::max(0.0, out.lhs * (1.0 - out.lhs)) /
                         static_cast<double>(num_blocks));

  // rhs: the weighted single-draw estimator.
  RngStream eval_rng = rng.substream(0xE7A1);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < num_blocks; ++i) {
    const Point x = model.draw(eval_rng);
    double term = 0.0;
    if (event(x))
      term = static_cast<double>(n) * std::pow(ecdf(f(x)), static_cast<double>(n - 1));
    sum += term;
    sum_sq += term * term;
  }
  out.rhs = sum / static_cast<double>(num_blocks);
  const double var = std::max(0.0, sum_sq / static_cast<double>(num_blocks) - out.rhs * out.rhs);
  out.rhs_se = std::sqrt(var / static_cast<double>(num_blocks));
  const double band = 4.0 * std::sqrt(out.lhs_se * out.lhs_se + out.rhs_se * out.rhs_se);
  out.pass = std::fabs(out.lhs - out.rhs) < band;
  return out;
}

namespace {

double adaptive_simpson_rec(const std::function<double(double)>& g, double a, double b, double fa,
                            double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = g(lm), frm = g(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& g, double a, double b, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double fa = g(a), fm = g(m), fb = g(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(g, a, b, fa, fm, fb, whole, tol, depth);
}

/// Integral over (lower, inf) through u = lower + scale t/(1-t).
double improper_integral(const std::function<double(double)>& g, double lower, double scale,
                         double tol, int depth) {
  const auto mapped = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double one_minus = 1.0 - t;
    const double u = lower + scale * t / one_minus;
    const double v = g(u);
    if (!std::isfinite(v)) return 0.0;
    return v * scale / (one_minus * one_minus);
  };
  return adaptive_simpson(mapped, 0.0, 1.0, tol, depth);
}

/// Density of the limit law in the inverted coordinates u_i = 1/x_i.
double inverted_integrand(const std::vector<double>& alphas, const LossFunction& f, double alpha,
                          double c, double u1, double u2) {
  if (u1 <= 0.0 || u2 <= 0.0) return 0.0;
  const double fv = f(Point{1.0 / u1, 1.0 / u2});
  const double radial = fv > 0.0 ? std::exp(-c * std::pow(fv, -alpha)) : 0.0;
  if (radial == 0.0) return 0.0;
  return radial * alphas[0] * std::pow(u1, alphas[0] - 1.0) * alphas[1] *
         std::pow(u2, alphas[1] - 1.0);
}

}  // namespace

QuadratureResult normalization_quadrature(const std::vector<double>& alphas,
                                          const LossFunction& f, double alpha, double c) {
  if (alphas.size() != 2) throw Error("quadrature normalization supports d = 2 only");
  QuadratureResult out;
  for (double tol : {1e-3, 1e-4, 1e-5}) {
    const auto outer = [&](double u1) {
      return improper_integral(
          [&](double u2) { return inverted_integrand(alphas, f, alpha, c, u1, u2); }, 0.0, 1.0,
          tol / 20.0, 28);
    };
    out.refinements.push_back(improper_integral(outer, 0.0, 1.0, tol, 28));
  }
  out.value = out.refinements.back();
  out.error = std::fabs(out.refinements.back() - out.refinements[out.refinements.size() - 2]);
  out.converged = out.error <= 2e-4 * std::max(1.0, std::fabs(out.value));
  return out;
}

double truncated_normalization_mass(const std::vector<double>& alphas, const LossFunction& f,
                                    double alpha, double c, double box_side) {
  if (alphas.size() != 2) throw Error("quadrature normalization supports d = 2 only");
  if (!(box_side > 0.0)) throw Error("box side must be positive");
  const double lower = 1.0 / box_side;
  const double scale = std::clamp(1.0 / (c * lower), 1.0, 1e8);
  const auto outer = [&](double u1) {
    const double inner_scale = std::clamp(1.0 / (c * std::max(u1, lower)), 1e-8, 1e8);
    return improper_integral(
        [&](double u2) { return inverted_integrand(alphas, f, alpha, c, u1, u2); }, lower,
        inner_scale, 1e-4, 34);
  };
  return improper_integral(outer, lower, scale, 1e-3, 34);
}

double hill_tail_index(std::vector<double> sample, std::size_t k) {
  if (k + 1 > sample.size()) throw Error("hill estimator needs k < n");
  for (double v : sample) {
    if (!(v > 0.0)) throw Error("hill estimator needs strictly positive samples");
  }
  std::sort(sample.begin(), sample.end(), std::greater<>());
  const double pivot = sample[k];
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += std::log(sample[i] / pivot);
  return static_cast<double>(k) / s;
}

std::size_t hill_default_k(std::size_t n) {
  return static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), 0.6)));
}

}  // namespace iex
