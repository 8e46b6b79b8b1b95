#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace statsub {

// Second-order forward-mode jet: the value of a scalar quantity together with
// its gradient and Hessian with respect to the d active chart coordinates.
// The Hessian is stored as a packed upper triangle, so symmetry is structural
// rather than a numerical accident.
//
// Jets propagate exactly through rational arithmetic and the elementary
// functions below.  Quantities assembled from first derivatives of other jets
// (see partial()) carry an exact value and gradient; their Hessian block is a
// symmetric truncation, which is all the downstream geometry ever relies on.
class Jet2 {
 public:
  Jet2() = default;

  static Jet2 constant(double value, int dim);
  // Seed for the i-th coordinate of a d-dimensional chart.
  static Jet2 coordinate(double value, int index, int dim);
  // The jet of the partial derivative d(a)/dx_i: value and gradient are taken
  // from a's gradient and Hessian, the own Hessian of the result is zeroed.
  static Jet2 partial(const Jet2& a, int i);

  int dim() const { return static_cast<int>(grad_.size()); }

  double value() const { return value_; }
  double& value() { return value_; }

  double grad(int i) const { return grad_[i]; }
  double& grad(int i) { return grad_[i]; }
  std::span<const double> gradient() const { return grad_; }

  double hess(int i, int j) const { return hess_[pack(i, j)]; }
  double& hess_at(int i, int j) { return hess_[pack(i, j)]; }

  bool finite() const;

  Jet2& operator+=(const Jet2& b);
  Jet2& operator-=(const Jet2& b);
  Jet2 operator-() const;

 private:
  int pack(int i, int j) const {
    if (i > j) std::swap(i, j);
    const int d = dim();
    return i * d - i * (i - 1) / 2 + (j - i);
  }

  friend Jet2 operator+(const Jet2&, const Jet2&);
  friend Jet2 operator-(const Jet2&, const Jet2&);
  friend Jet2 operator*(const Jet2&, const Jet2&);
  friend Jet2 operator/(const Jet2&, const Jet2&);
  friend Jet2 chain_unary(const Jet2& a, double f, double df, double ddf);

  double value_ = 0.0;
  std::vector<double> grad_;
  std::vector<double> hess_;  // packed upper triangle, size d(d+1)/2
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);

Jet2 operator+(const Jet2& a, double c);
Jet2 operator+(double c, const Jet2& a);
Jet2 operator-(const Jet2& a, double c);
Jet2 operator-(double c, const Jet2& a);
Jet2 operator*(const Jet2& a, double c);
Jet2 operator*(double c, const Jet2& a);
Jet2 operator/(const Jet2& a, double c);
Jet2 operator/(double c, const Jet2& a);

Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 tan(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sqrt(const Jet2& a);
Jet2 tanh(const Jet2& a);
Jet2 abs(const Jet2& a);
// Integer exponents are expanded by repeated multiplication; real exponents
// require a strictly positive base.
Jet2 pow_int(const Jet2& a, long long n);
Jet2 pow_real(const Jet2& a, double e);

// Shims that let templated linear algebra run over plain doubles and jets
// with the same source.
inline double value_of(double x) { return x; }
inline double value_of(const Jet2& a) { return a.value(); }
inline double constant_like(double, double c) { return c; }
inline Jet2 constant_like(const Jet2& a, double c) { return Jet2::constant(c, a.dim()); }

}  // namespace statsub
