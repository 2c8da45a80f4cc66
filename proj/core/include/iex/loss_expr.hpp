#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "iex/geometry.hpp"

namespace iex {

struct Rational {
  long long num = 0;
  long long den = 1;
};

namespace detail {
struct ExprNode;
}

/// Expression tree over coordinates x1..xd, positive constants, + - * /,
/// pow(expr, rational), ^rational, min, max and pos (positive part).
class LossExpr {
 public:
  double eval(std::span<const double> x) const;
  /// Highest coordinate index referenced (1-based).
  int max_coordinate() const;
  std::string print() const;

  explicit LossExpr(std::shared_ptr<const detail::ExprNode> root);

 private:
  std::shared_ptr<const detail::ExprNode> root_;
};

/// Recursive-descent parse; throws ParseError with the offending position.
LossExpr parse_loss_expr(std::string_view text);

/// Wraps a parsed expression as a LossFunction after probe-validating
/// 1-homogeneity and nonnegativity (1000 probes each, fixed internal seed so
/// acceptance of a loss never depends on the run seed).  Throws Error with a
/// witness description on failure.
LossFunction make_expression_loss(const LossExpr& expr, int dimension);

LossFunction parse_loss(std::string_view text, int dimension);

}  // namespace iex
