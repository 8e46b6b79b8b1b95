#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "statsub/errors.hpp"
#include "statsub/expr.hpp"

using statsub::Expression;

namespace {
const std::vector<std::string> k2{"x1", "x2"};
const std::vector<std::string> k3{"x1", "x2", "x3"};

double ev(const std::string& t, const std::vector<std::string>& c, std::vector<double> x) {
  return Expression::parse(t, c).eval(x);
}
}  // namespace

TEST_CASE("arithmetic, precedence and associativity") {
  CHECK(ev("1 + 2*3", k2, {0, 0}) == doctest::Approx(7.0));
  CHECK(ev("(x1 + x2)/sqrt(2)", k2, {1, 1}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(ev("-x1^2", k2, {3, 0}) == doctest::Approx(-9.0));   // unary minus after ^
  CHECK(ev("2^3^2", k2, {0, 0}) == doctest::Approx(512.0));  // right-associative
  CHECK(ev("6/3/2", k2, {0, 0}) == doctest::Approx(1.0));    // left-associative
  CHECK(ev("pi", k2, {0, 0}) == doctest::Approx(3.14159265358979));
  CHECK(ev("e", k2, {0, 0}) == doctest::Approx(std::exp(1.0)));
  CHECK(ev("x1^3", k2, {-2, 0}) == doctest::Approx(-8.0));  // integer power, negative base
  CHECK(ev("abs(-x1)", k2, {-3, 0}) == doctest::Approx(3.0));
  CHECK(ev("tan(x1)", k2, {0.3, 0}) == doctest::Approx(std::tan(0.3)));
  CHECK(ev("log(exp(x1))", k2, {0.7, 0}) == doctest::Approx(0.7));
}

TEST_CASE("parse and evaluation errors") {
  CHECK_THROWS_AS(Expression::parse("x1 +", k2), statsub::SyntaxError);
  CHECK_THROWS_AS(Expression::parse("(x1", k2), statsub::SyntaxError);
  CHECK_THROWS_AS(Expression::parse("x1 x2", k2), statsub::SyntaxError);
  CHECK_THROWS_AS(Expression::parse("q3 + 1", k2), statsub::UnknownIdentifier);
  CHECK_THROWS_AS(Expression::parse("sin(x1, x2)", k2), statsub::ArityError);
  CHECK_THROWS_AS(Expression::parse("x1^x2", k2), statsub::SyntaxError);  // non-constant exponent
  CHECK_THROWS_AS(ev("log(x1)", k2, {-1, 0}), statsub::DomainError);
  CHECK_THROWS_AS(ev("sqrt(x1)", k2, {-1, 0}), statsub::DomainError);
  CHECK_THROWS_AS(ev("x1^0.5", k2, {-1, 0}), statsub::DomainError);  // real power, negative base
  CHECK_THROWS_AS(ev("1/x1", k2, {0, 0}), statsub::DomainError);
}

TEST_CASE("symbolic derivative matches finite differences") {
  std::mt19937_64 rng(42);
  const std::vector<std::string> exprs = {
      "x1^3 * x2", "sin(x1)*cos(x2) + x3", "exp(0.3*x1) / (2 + x2^2)",
      "tanh(x1*x2) + sqrt(1 + x3^2)", "(x1 + x2 + x3)^4"};
  for (const auto& t : exprs) {
    Expression f = Expression::parse(t, k3);
    for (int k = 0; k < 3; ++k) {
      Expression df = f.derivative(k);
      for (int p = 0; p < 10; ++p) {
        auto x = oracles::random_point(rng, 3);
        const double sym = df.eval(x);
        const double fd = oracles::fd_gradient([&](const std::vector<double>& q) { return f.eval(q); },
                                               x, k);
        CHECK(sym == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("str() round-trips through parse()") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 30; ++n) {
    const std::string t = oracles::random_expr(rng, k3, 3);
    Expression f = Expression::parse(t, k3);
    Expression g = Expression::parse(f.str(), k3);
    for (int p = 0; p < 20; ++p) {
      auto x = oracles::random_point(rng, 3);
      const double a = f.eval(x);
      const double b = g.eval(x);
      CHECK(std::abs(a - b) <= 1e-15 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("jet of a product equals the product of jets") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 25; ++n) {
    const std::string ta = oracles::random_expr(rng, k3, 2);
    const std::string tb = oracles::random_expr(rng, k3, 2);
    Expression a = Expression::parse(ta, k3);
    Expression b = Expression::parse(tb, k3);
    Expression ab = Expression::parse("(" + ta + ")*(" + tb + ")", k3);
    for (int p = 0; p < 5; ++p) {
      auto x = oracles::random_point(rng, 3);
      const statsub::Jet2 ja = a.eval_jet(x);
      const statsub::Jet2 jb = b.eval_jet(x);
      const statsub::Jet2 jprod = ja * jb;
      const statsub::Jet2 jab = ab.eval_jet(x);
      auto rel = [](double u, double v) {
        return std::abs(u - v) / std::max({1.0, std::abs(u), std::abs(v)});
      };
      CHECK(rel(jprod.value(), jab.value()) <= 1e-12);
      for (int i = 0; i < 3; ++i) {
        CHECK(rel(jprod.grad(i), jab.grad(i)) <= 1e-12);
        for (int j = i; j < 3; ++j) CHECK(rel(jprod.hess(i, j), jab.hess(i, j)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("dimension and empty flags") {
  Expression f = Expression::parse("x1 + x2", k2);
  CHECK(f.dimension() == 2);
  CHECK_FALSE(f.empty());
  Expression g;
  CHECK(g.empty());
}
