#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "statsub/jet.hpp"

namespace statsub {

// Immutable scalar expression over a declared coordinate list.
//
// Grammar (EBNF):
//
//   expression := term { ('+' | '-') term }
//   term       := unary { ('*' | '/') unary }
//   unary      := '-' unary | power
//   power      := primary [ '^' unary ]
//   primary    := number
//               | identifier
//               | identifier '(' expression { ',' expression } ')'
//               | '(' expression ')'
//
// '^' is right-associative and binds tighter than unary minus, so -x^2 parses
// as -(x^2).  The exponent must be a constant subexpression; integer exponents
// are evaluated by repeated multiplication, real exponents need a positive
// base.  Functions: sin cos tan exp log sqrt tanh abs.  Constants: pi, e.
// Identifiers that are neither coordinates, functions nor constants raise
// UnknownIdentifier.
class Expression {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  Expression() = default;

  static Expression parse(std::string_view text, std::span<const std::string> coordinates);

  // Number of coordinates the expression was parsed against.
  int dimension() const { return dim_; }
  bool empty() const { return root_ == nullptr; }

  double eval(std::span<const double> point) const;
  // Evaluates with every coordinate active, returning value, gradient and
  // Hessian at the point.
  Jet2 eval_jet(std::span<const double> point) const;

  // Exact symbolic partial derivative with respect to the given coordinate
  // index.  Used wherever a derived field (differential of a map, metric
  // derivative) must itself be evaluated as a second-order jet; demoting a
  // jet would truncate the Hessian instead.
  Expression derivative(int coordinate) const;

  // Round-trips through parse(): parse(str()) evaluates identically.
  std::string str() const;

 private:
  Expression(NodePtr root, std::vector<std::string> coords);

  NodePtr root_;
  std::vector<std::string> coords_;
  int dim_ = 0;
};

}  // namespace statsub
