#include "iex/loss_expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

namespace iex {
namespace detail {

enum class Op { Num, Coord, Add, Sub, Mul, Div, Pow, Min, Max, Pos };

struct ExprNode {
  Op op;
  double value = 0.0;                                   // Num
  int coord = 0;                                        // Coord, 1-based
  Rational exponent;                                    // Pow
  std::vector<std::shared_ptr<const ExprNode>> kids;
};

using NodePtr = std::shared_ptr<const ExprNode>;

namespace {

double eval_node(const ExprNode& n, std::span<const double> x) {
  switch (n.op) {
    case Op::Num:
      return n.value;
    case Op::Coord:
      return x[static_cast<std::size_t>(n.coord - 1)];
    case Op::Add:
      return eval_node(*n.kids[0], x) + eval_node(*n.kids[1], x);
    case Op::Sub:
      return eval_node(*n.kids[0], x) - eval_node(*n.kids[1], x);
    case Op::Mul:
      return eval_node(*n.kids[0], x) * eval_node(*n.kids[1], x);
    case Op::Div:
      return eval_node(*n.kids[0], x) / eval_node(*n.kids[1], x);
    case Op::Pow: {
      const double b = eval_node(*n.kids[0], x);
      const double e = static_cast<double>(n.exponent.num) / static_cast<double>(n.exponent.den);
      if (b < 0.0 && n.exponent.den != 1) return std::nan("");
      return std::pow(b, e);
    }
    case Op::Min: {
      double m = eval_node(*n.kids[0], x);
      for (std::size_t i = 1; i < n.kids.size(); ++i) m = std::min(m, eval_node(*n.kids[i], x));
      return m;
    }
    case Op::Max: {
      double m = eval_node(*n.kids[0], x);
      for (std::size_t i = 1; i < n.kids.size(); ++i) m = std::max(m, eval_node(*n.kids[i], x));
      return m;
    }
    case Op::Pos:
      return std::max(eval_node(*n.kids[0], x), 0.0);
  }
  return std::nan("");
}

int max_coord_node(const ExprNode& n) {
  int m = n.op == Op::Coord ? n.coord : 0;
  for (const auto& k : n.kids) m = std::max(m, max_coord_node(*k));
  return m;
}

int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    default:
      return 3;
  }
}

void print_node(const ExprNode& n, std::ostream& os);

void print_child(const ExprNode& child, int parent_prec, std::ostream& os) {
  if (precedence(child.op) < parent_prec) {
    os << '(';
    print_node(child, os);
    os << ')';
  } else {
    print_node(child, os);
  }
}

void print_args(const ExprNode& n, const char* name, std::ostream& os) {
  os << name << '(';
  for (std::size_t i = 0; i < n.kids.size(); ++i) {
    if (i) os << ", ";
    print_node(*n.kids[i], os);
  }
  os << ')';
}

void print_node(const ExprNode& n, std::ostream& os) {
  switch (n.op) {
    case Op::Num: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << n.value;
      os << tmp.str();
      break;
    }
    case Op::Coord:
      os << 'x' << n.coord;
      break;
    case Op::Add:
      print_child(*n.kids[0], 1, os);
      os << " + ";
      print_child(*n.kids[1], 2, os);
      break;
    case Op::Sub:
      print_child(*n.kids[0], 1, os);
      os << " - ";
      print_child(*n.kids[1], 2, os);
      break;
    case Op::Mul:
      print_child(*n.kids[0], 2, os);
      os << " * ";
      print_child(*n.kids[1], 3, os);
      break;
    case Op::Div:
      print_child(*n.kids[0], 2, os);
      os << " / ";
      print_child(*n.kids[1], 3, os);
      break;
    case Op::Pow:
      os << "pow(";
      print_node(*n.kids[0], os);
      os << ", " << n.exponent.num;
      if (n.exponent.den != 1) os << '/' << n.exponent.den;
      os << ')';
      break;
    case Op::Min:
      print_args(n, "min", os);
      break;
    case Op::Max:
      print_args(n, "max", os);
      break;
    case Op::Pos:
      print_args(n, "pos", os);
      break;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    skip_ws();
    if (at_end()) throw ParseError("empty expression", 0);
    NodePtr e = expr();
    skip_ws();
    if (!at_end()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      skip_ws();
      if (accept('+')) {
        lhs = binary(Op::Add, lhs, term());
      } else if (accept('-')) {
        lhs = binary(Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      skip_ws();
      if (accept('*')) {
        lhs = binary(Op::Mul, lhs, factor());
      } else if (accept('/')) {
        lhs = binary(Op::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    skip_ws();
    NodePtr a = atom_or_call();
    skip_ws();
    if (accept('^')) {
      auto n = std::make_shared<ExprNode>();
      n->op = Op::Pow;
      n->kids.push_back(a);
      n->exponent = rational();
      return n;
    }
    return a;
  }

  NodePtr atom_or_call() {
    skip_ws();
    if (at_end()) throw ParseError("unexpected end of expression", pos_);
    const char c = peek();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      std::string ident;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
        ident += text_[pos_++];
      if (ident.size() >= 2 && ident[0] == 'x' &&
          std::all_of(ident.begin() + 1, ident.end(),
                      [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
        auto n = std::make_shared<ExprNode>();
        n->op = Op::Coord;
        n->coord = std::stoi(ident.substr(1));
        if (n->coord < 1) throw ParseError("coordinate index must be >= 1", start);
        return n;
      }
      if (ident == "pow") return pow_call();
      if (ident == "min") return arg_call(Op::Min, 2);
      if (ident == "max") return arg_call(Op::Max, 2);
      if (ident == "pos") return arg_call(Op::Pos, 1);
      throw ParseError("unknown identifier '" + ident + "'", start);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr pow_call() {
    expect('(');
    NodePtr base = expr();
    skip_ws();
    expect(',');
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Pow;
    n->kids.push_back(base);
    n->exponent = rational();
    skip_ws();
    expect(')');
    return n;
  }

  NodePtr arg_call(Op op, std::size_t min_args) {
    expect('(');
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->kids.push_back(expr());
    std::size_t count = 1;
    skip_ws();
    while (accept(',')) {
      n->kids.push_back(expr());
      ++count;
      skip_ws();
    }
    expect(')');
    if (op == Op::Pos && count != 1) throw ParseError("pos takes exactly one argument", pos_);
    if (op != Op::Pos && count < min_args)
      throw ParseError("min/max need at least two arguments", pos_);
    return n;
  }

  Rational rational() {
    skip_ws();
    const bool parens = accept('(');
    long long num = integer();
    long long den = 1;
    skip_ws();
    if (accept('/')) den = integer();
    if (den == 0) throw ParseError("zero denominator in exponent", pos_);
    if (parens) {
      skip_ws();
      expect(')');
    }
    return Rational{num, den};
  }

  long long integer() {
    skip_ws();
    std::size_t start = pos_;
    bool neg = accept('-');
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
      throw ParseError("expected an integer", pos_);
    long long v = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
      v = v * 10 + (text_[pos_++] - '0');
    (void)start;
    return neg ? -v : v;
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (!at_end() &&
           (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == 'e' ||
            peek() == 'E' ||
            ((peek() == '+' || peek() == '-') && pos_ > start &&
             (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
      ++pos_;
    const std::string tok(text_.substr(start, pos_ - start));
    try {
      auto n = std::make_shared<ExprNode>();
      n->op = Op::Num;
      n->value = std::stod(tok);
      if (!(n->value >= 0.0)) throw ParseError("constants must be nonnegative", start);
      return n;
    } catch (const std::invalid_argument&) {
      throw ParseError("malformed number '" + tok + "'", start);
    }
  }

  static NodePtr binary(Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->kids = {std::move(a), std::move(b)};
    return n;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  bool accept(char c) {
    if (!at_end() && peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip_ws();
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace
}  // namespace detail

LossExpr::LossExpr(std::shared_ptr<const detail::ExprNode> root) : root_(std::move(root)) {}

double LossExpr::eval(std::span<const double> x) const { return detail::eval_node(*root_, x); }

int LossExpr::max_coordinate() const { return detail::max_coord_node(*root_); }

std::string LossExpr::print() const {
  std::ostringstream os;
  detail::print_node(*root_, os);
  return os.str();
}

LossExpr parse_loss_expr(std::string_view text) { return LossExpr(detail::Parser(text).parse()); }

namespace {
// Loss acceptance must not depend on the experiment seed.
constexpr std::uint64_t kValidationSeed = 0x1EC55EEDCAFEULL;

std::string point_to_string(const Point& x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ')';
  return os.str();
}
}  // namespace

LossFunction make_expression_loss(const LossExpr& expr, int dimension) {
  if (expr.max_coordinate() > dimension)
    throw Error("expression references x" + std::to_string(expr.max_coordinate()) +
                " but dimension is " + std::to_string(dimension));
  LossFunction f = LossFunction::expression(
      [expr](std::span<const double> x) { return expr.eval(x); }, dimension, expr.print());
  RngStream rng(kValidationSeed);
  const auto hom = assert_homogeneous(f, 1000, rng);
  if (!hom.pass) {
    std::ostringstream os;
    os << "loss is not 1-homogeneous: witness x = " << point_to_string(hom.witness_x)
       << ", lambda = " << hom.witness_lambda << ", violation = " << hom.violation;
    throw Error(os.str());
  }
  const auto nn = assert_nonnegative(f, 1000, rng);
  if (!nn.pass) {
    std::ostringstream os;
    os << "loss takes a negative or non-finite value " << nn.value << " at x = "
       << point_to_string(nn.witness_x);
    throw Error(os.str());
  }
  return f;
}

LossFunction parse_loss(std::string_view text, int dimension) {
  return make_expression_loss(parse_loss_expr(text), dimension);
}

}  // namespace iex
