#include "iex/implicit_sampling.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace iex {

namespace {

// Stream ids reserved for pilot draws, outside the replicate range.
constexpr std::uint64_t kPilotStream = 0x8000000000000001ULL;

bool ranks_before(double loss_a, std::size_t idx_a, double loss_b, std::size_t idx_b) {
  return loss_a > loss_b || (loss_a == loss_b && idx_a < idx_b);
}

}  // namespace

ImplicitSelection implicit_argmax(const std::vector<Point>& points, const LossFunction& f) {
  if (points.empty()) throw Error("implicit_argmax needs a nonempty block");
  std::size_t best = 0;
  double best_loss = f(points[0]);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double v = f(points[i]);
    if (v > best_loss) {
      best = i;
      best_loss = v;
    }
  }
  if (best_loss == 0.0)
    throw DegenerateBlockError("every loss in the block is zero; the implicit maximum is undefined");
  return ImplicitSelection{best, best_loss, points[best]};
}

std::vector<std::size_t> implicit_order_indices(const std::vector<Point>& points,
                                                const LossFunction& f, std::size_t m) {
  if (m > points.size()) throw Error("requested more order statistics than block points");
  std::vector<double> losses(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) losses[i] = f(points[i]);
  std::vector<std::size_t> idx(points.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return ranks_before(losses[a], a, losses[b], b);
  });
  idx.resize(m);
  return idx;
}

double NormalizingSequence::value(std::size_t n, const PointSampler& model, const LossFunction& f,
                                  RngStream pilot_rng) const {
  if (n < 1) throw Error("block size must be >= 1");
  if (mode == Mode::Theoretical) {
    if (!(alpha > 0.0)) throw Error("theoretical normalization needs alpha > 0");
    return std::pow(static_cast<double>(n), 1.0 / alpha);
  }
  if (n == 1) return 1.0;
  const std::size_t pilot = 10 * n;
  std::vector<double> losses(pilot);
  for (double& v : losses) v = f(model.draw(pilot_rng));
  std::sort(losses.begin(), losses.end());
  // empirical (1 - 1/n) quantile
  const double q = 1.0 - 1.0 / static_cast<double>(n);
  const std::size_t k = std::min(pilot - 1, static_cast<std::size_t>(
                                                std::ceil(q * static_cast<double>(pilot)) - 1));
  const double a = losses[k];
  if (!(a > 0.0)) throw Error("empirical normalization quantile is not positive");
  return a;
}

namespace {

BlockResult run_block(const PointSampler& model, const LossFunction& f, std::size_t n,
                      std::size_t replicate, std::uint64_t seed, std::size_t top_m, double a_n) {
  RngStream rng(seed, replicate);
  // streaming top-m selection with the smallest-index tie rule
  struct Cand {
    std::size_t index;
    double loss;
    Point point;
  };
  std::vector<Cand> top;
  top.reserve(top_m + 1);
  for (std::size_t i = 0; i < n; ++i) {
    Point x = model.draw(rng);
    const double v = f(x);
    if (top.size() == top_m &&
        !ranks_before(v, i, top.back().loss, top.back().index))
      continue;
    auto pos = std::find_if(top.begin(), top.end(), [&](const Cand& c) {
      return ranks_before(v, i, c.loss, c.index);
    });
    top.insert(pos, Cand{i, v, std::move(x)});
    if (top.size() > top_m) top.pop_back();
  }
  BlockResult res;
  res.replicate = replicate;
  res.degenerate = top.empty() || top.front().loss == 0.0;
  if (!res.degenerate) {
    for (auto& c : top) {
      Point norm(c.point.size());
      for (std::size_t j = 0; j < norm.size(); ++j) norm[j] = c.point[j] / a_n;
      res.selected.push_back(ImplicitSelection{c.index, c.loss, std::move(c.point)});
      res.normalized.push_back(std::move(norm));
    }
  }
  return res;
}

}  // namespace

BlockMaximaResult block_implicit_maxima(const PointSampler& model, const LossFunction& f,
                                        std::size_t n, std::size_t replicates,
                                        const NormalizingSequence& a, std::uint64_t seed,
                                        std::size_t top_m, int workers) {
  if (n < 1 || replicates < 1) throw Error("block size and replicate count must be >= 1");
  if (top_m < 1 || top_m > n) throw Error("top_m must lie in [1, n]");
  if (model.dimension != f.dimension())
    throw DimensionError("model and loss dimensions disagree");

  BlockMaximaResult out;
  out.a_n = a.value(n, model, f, RngStream(seed, kPilotStream));
  out.blocks.resize(replicates);
  out.degenerate_count = 0;

  const int nworkers = std::max(1, workers);
  if (nworkers == 1 || replicates == 1) {
    for (std::size_t r = 0; r < replicates; ++r)
      out.blocks[r] = run_block(model, f, n, r, seed, top_m, out.a_n);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nworkers));
    for (int w = 0; w < nworkers; ++w) {
      pool.emplace_back([&, w]() {
        for (std::size_t r = static_cast<std::size_t>(w); r < replicates;
             r += static_cast<std::size_t>(nworkers))
          out.blocks[r] = run_block(model, f, n, r, seed, top_m, out.a_n);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& b : out.blocks)
    if (b.degenerate) ++out.degenerate_count;
  return out;
}

}  // namespace iex
