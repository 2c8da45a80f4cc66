#include "iex/implicit_sampling.hpp"

#include <cmath>

#include "doctest.h"
#include "iex/errors.hpp"

using namespace iex;

namespace {

// 1-d points with the identity loss; lets us freeze selections on plain numbers.
std::vector<Point> wrap(std::initializer_list<double> values) {
  std::vector<Point> pts;
  for (double v : values) pts.push_back({v});
  return pts;
}

const LossFunction kId =
    LossFunction::expression([](std::span<const double> x) { return std::max(x[0], 0.0); }, 1, "pos(x1)");

}  // namespace

TEST_CASE("argmax picks the smallest index among ties") {
  const auto pts = wrap({3.0, 1.0, 3.0, 2.0});
  const auto sel = implicit_argmax(pts, kId);
  CHECK(sel.index == 0);
  CHECK(sel.loss_value == doctest::Approx(3.0));
  CHECK(sel.point[0] == doctest::Approx(3.0));
}

TEST_CASE("order indices sort by loss then by index") {
  const auto pts = wrap({3.0, 1.0, 3.0, 2.0});
  const auto order = implicit_order_indices(pts, kId, 4);
  CHECK(order == std::vector<std::size_t>{0, 2, 3, 1});
  const auto top2 = implicit_order_indices(pts, kId, 2);
  CHECK(top2 == std::vector<std::size_t>{0, 2});
}

TEST_CASE("argmax under a sum loss") {
  const auto sum = LossFunction::weighted_sum({1.0, 1.0});
  const std::vector<Point> pts{{1.0, 0.0}, {0.0, 3.0}, {2.0, 0.0}};
  CHECK(implicit_argmax(pts, sum).index == 1);  // losses 1, 3, 2
  const std::vector<Point> tied{{1.0, 1.0}, {2.0, 0.0}};
  CHECK(implicit_argmax(tied, sum).index == 0);
}

TEST_CASE("degenerate block throws") {
  const auto pts = wrap({-1.0, 0.0, -2.0});
  CHECK_THROWS_AS(implicit_argmax(pts, kId), DegenerateBlockError);
}

TEST_CASE("argmax is invariant under increasing transforms of the loss") {
  // k(n) built from f and from psi(f) = f^3 agree pointwise
  const auto cubed = LossFunction::expression(
      [](std::span<const double> x) { return std::pow(std::max(x[0], 0.0), 3.0); }, 1, "pos(x1)^3");
  RngStream rng(21);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<Point> pts;
    for (int i = 0; i < 50; ++i) pts.push_back({rng.uniform(-1.0, 4.0)});
    CHECK(implicit_argmax(pts, kId).index == implicit_argmax(pts, cubed).index);
  }
}

TEST_CASE("theoretical normalizing sequence") {
  const auto a = NormalizingSequence::theoretical(2.0);
  const PointSampler model = pareto_model({1.0, 1.0});
  const auto f = LossFunction::harmonic(2);
  CHECK(a.value(100, model, f, RngStream(1, 0)) == doctest::Approx(10.0));
  CHECK(a.value(10000, model, f, RngStream(1, 0)) == doctest::Approx(100.0));
}

TEST_CASE("empirical quantile sequence tracks the theoretical rate") {
  // f(X) for 2-d unit Pareto under the harmonic loss has exact tail 0.5 x^-2,
  // so the (1 - 1/n) quantile is sqrt(0.5 n)
  const auto a = NormalizingSequence::empirical_quantile();
  const PointSampler model = pareto_model({1.0, 1.0});
  const auto f = LossFunction::harmonic(2);
  const std::size_t n = 2000;
  const double v = a.value(n, model, f, RngStream(7, 0));
  const double expected = std::sqrt(0.5 * static_cast<double>(n));
  CHECK(v == doctest::Approx(expected).epsilon(0.15));
}

TEST_CASE("a single-point block returns the raw sample") {
  const PointSampler model = pareto_model({1.0, 1.0});
  const auto f = LossFunction::harmonic(2);
  const auto r = block_implicit_maxima(model, f, 1, 5, NormalizingSequence::theoretical(2.0), 8, 1, 1);
  CHECK(r.a_n == doctest::Approx(1.0));
  for (const auto& b : r.blocks) {
    REQUIRE(b.normalized.size() == 1);
    CHECK(b.selected[0].index == 0);
    CHECK(b.normalized[0] == b.selected[0].point);
  }
}

TEST_CASE("block maxima are schedule independent") {
  const PointSampler model = pareto_model({1.0, 1.0});
  const auto f = LossFunction::harmonic(2);
  const auto a = NormalizingSequence::theoretical(2.0);
  const auto r1 = block_implicit_maxima(model, f, 50, 40, a, 99, 3, 1);
  const auto r8 = block_implicit_maxima(model, f, 50, 40, a, 99, 3, 8);
  REQUIRE(r1.blocks.size() == r8.blocks.size());
  CHECK(r1.a_n == r8.a_n);
  for (std::size_t i = 0; i < r1.blocks.size(); ++i) {
    CHECK(r1.blocks[i].replicate == i);
    REQUIRE(r1.blocks[i].normalized.size() == 3);
    for (std::size_t k = 0; k < 3; ++k)
      for (int c = 0; c < 2; ++c)
        CHECK(r1.blocks[i].normalized[k][c] == r8.blocks[i].normalized[k][c]);
  }
}

TEST_CASE("block maxima respect the seed") {
  const PointSampler model = pareto_model({1.0, 1.0});
  const auto f = LossFunction::harmonic(2);
  const auto a = NormalizingSequence::theoretical(2.0);
  const auto r1 = block_implicit_maxima(model, f, 50, 10, a, 1, 1, 1);
  const auto r2 = block_implicit_maxima(model, f, 50, 10, a, 2, 1, 1);
  bool any_diff = false;
  for (std::size_t i = 0; i < r1.blocks.size(); ++i)
    if (r1.blocks[i].normalized[0] != r2.blocks[i].normalized[0]) any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("within a block the selected losses decrease") {
  const PointSampler model = pareto_model({1.0, 2.0});
  const auto f = LossFunction::harmonic(2);
  const auto a = NormalizingSequence::theoretical(3.0);
  const auto r = block_implicit_maxima(model, f, 100, 20, a, 5, 5, 2);
  CHECK(r.degenerate_count == 0);
  for (const auto& block : r.blocks) {
    REQUIRE(block.selected.size() == 5);
    for (std::size_t k = 1; k < block.selected.size(); ++k) {
      CHECK(block.selected[k].loss_value <= block.selected[k - 1].loss_value);
      if (block.selected[k].loss_value == block.selected[k - 1].loss_value)
        CHECK(block.selected[k].index > block.selected[k - 1].index);
    }
  }
}
