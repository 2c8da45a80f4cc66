#pragma once

#include <cstdint>
#include <vector>

#include "iex/models.hpp"

namespace iex {

struct ImplicitSelection {
  std::size_t index;  // smallest index attaining the maximum loss
  double loss_value;
  Point point;
};

/// The implicit argmax: smallest index i with f(X_i) = max_j f(X_j).
/// Throws DegenerateBlockError when every loss in the block is zero.
ImplicitSelection implicit_argmax(const std::vector<Point>& points, const LossFunction& f);

/// Indices of the m largest losses in decreasing loss order, ties broken by
/// increasing index.  The first entry equals implicit_argmax.
std::vector<std::size_t> implicit_order_indices(const std::vector<Point>& points,
                                                const LossFunction& f, std::size_t m);

/// The scaling sequence a_n.  Theoretical mode is n^(1/alpha); the
/// empirical-quantile mode estimates the (1 - 1/n) quantile of f(X) from a
/// pilot run of 10 n loss draws (the stand-in when a_n carries an
/// unspecified slowly varying factor, as for the Gaussian copula).
struct NormalizingSequence {
  enum class Mode { Theoretical, EmpiricalQuantile };
  Mode mode = Mode::Theoretical;
  double alpha = 1.0;

  static NormalizingSequence theoretical(double alpha) {
    return NormalizingSequence{Mode::Theoretical, alpha};
  }
  static NormalizingSequence empirical_quantile() {
    return NormalizingSequence{Mode::EmpiricalQuantile, 0.0};
  }

  double value(std::size_t n, const PointSampler& model, const LossFunction& f,
               RngStream pilot_rng) const;
};

struct BlockResult {
  std::size_t replicate;
  bool degenerate;                         // whole block in the cone
  std::vector<ImplicitSelection> selected; // raw top-m order statistics
  std::vector<Point> normalized;           // a_n^-1 X_k(i;n)
};

struct BlockMaximaResult {
  double a_n;
  std::size_t degenerate_count;
  std::vector<BlockResult> blocks;  // ordered by replicate id
};

/// R replicates of: draw n iid points from stream (seed, r), select the
/// top_m implicit order statistics, normalize by a_n.  Parallel over
/// replicates; output is schedule-independent.
BlockMaximaResult block_implicit_maxima(const PointSampler& model, const LossFunction& f,
                                        std::size_t n, std::size_t replicates,
                                        const NormalizingSequence& a, std::uint64_t seed,
                                        std::size_t top_m, int workers = 1);

}  // namespace iex
