#include "statsub/jet.hpp"

#include <cmath>
#include <cstdlib>

#include "statsub/errors.hpp"

namespace statsub {

namespace {
int tri(int d) { return d * (d + 1) / 2; }
}  // namespace

Jet2 Jet2::constant(double value, int dim) {
  Jet2 r;
  r.value_ = value;
  r.grad_.assign(dim, 0.0);
  r.hess_.assign(tri(dim), 0.0);
  return r;
}

Jet2 Jet2::coordinate(double value, int index, int dim) {
  Jet2 r = constant(value, dim);
  r.grad_[index] = 1.0;
  return r;
}

Jet2 Jet2::partial(const Jet2& a, int i) {
  const int d = a.dim();
  Jet2 r = constant(a.grad_[i], d);
  for (int j = 0; j < d; ++j) r.grad_[j] = a.hess(i, j);
  return r;
}

bool Jet2::finite() const {
  if (!std::isfinite(value_)) return false;
  for (double g : grad_)
    if (!std::isfinite(g)) return false;
  for (double h : hess_)
    if (!std::isfinite(h)) return false;
  return true;
}

Jet2& Jet2::operator+=(const Jet2& b) {
  value_ += b.value_;
  for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] += b.grad_[i];
  for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] += b.hess_[i];
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& b) {
  value_ -= b.value_;
  for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] -= b.grad_[i];
  for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] -= b.hess_[i];
  return *this;
}

Jet2 Jet2::operator-() const {
  Jet2 r = *this;
  r.value_ = -r.value_;
  for (double& g : r.grad_) g = -g;
  for (double& h : r.hess_) h = -h;
  return r;
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r = a;
  r += b;
  return r;
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r = a;
  r -= b;
  return r;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  const int d = a.dim();
  Jet2 r = Jet2::constant(a.value_ * b.value_, d);
  for (int i = 0; i < d; ++i) r.grad_[i] = a.grad_[i] * b.value_ + a.value_ * b.grad_[i];
  int k = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j, ++k) {
      r.hess_[k] = a.hess_[k] * b.value_ + a.value_ * b.hess_[k] + a.grad_[i] * b.grad_[j] +
                   a.grad_[j] * b.grad_[i];
    }
  }
  return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
  if (b.value_ == 0.0) throw DomainError("division by zero");
  const int d = a.dim();
  Jet2 r = Jet2::constant(a.value_ / b.value_, d);
  for (int i = 0; i < d; ++i) r.grad_[i] = (a.grad_[i] - r.value_ * b.grad_[i]) / b.value_;
  int k = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j, ++k) {
      r.hess_[k] = (a.hess_[k] - r.value_ * b.hess_[k] - r.grad_[i] * b.grad_[j] -
                    r.grad_[j] * b.grad_[i]) /
                   b.value_;
    }
  }
  return r;
}

Jet2 operator+(const Jet2& a, double c) {
  Jet2 r = a;
  r.value() += c;
  return r;
}
Jet2 operator+(double c, const Jet2& a) { return a + c; }
Jet2 operator-(const Jet2& a, double c) { return a + (-c); }
Jet2 operator-(double c, const Jet2& a) { return (-a) + c; }

Jet2 operator*(const Jet2& a, double c) {
  Jet2 r = Jet2::constant(0.0, a.dim());
  r = a;
  r.value() *= c;
  for (int i = 0; i < a.dim(); ++i) r.grad(i) *= c;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i; j < a.dim(); ++j) r.hess_at(i, j) *= c;
  return r;
}
Jet2 operator*(double c, const Jet2& a) { return a * c; }
Jet2 operator/(const Jet2& a, double c) {
  if (c == 0.0) throw DomainError("division by zero");
  return a * (1.0 / c);
}
Jet2 operator/(double c, const Jet2& a) { return Jet2::constant(c, a.dim()) / a; }

// f, df, ddf are the function and its first two derivatives at a's value.
Jet2 chain_unary(const Jet2& a, double f, double df, double ddf) {
  const int d = a.dim();
  Jet2 r = Jet2::constant(f, d);
  for (int i = 0; i < d; ++i) r.grad_[i] = df * a.grad_[i];
  int k = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j, ++k) r.hess_[k] = df * a.hess_[k] + ddf * a.grad_[i] * a.grad_[j];
  return r;
}

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return chain_unary(a, s, c, -s);
}

Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return chain_unary(a, c, -s, -c);
}

Jet2 tan(const Jet2& a) {
  const double c = std::cos(a.value());
  if (c == 0.0) throw DomainError("tan at a pole");
  const double t = std::tan(a.value());
  const double sec2 = 1.0 / (c * c);
  return chain_unary(a, t, sec2, 2.0 * t * sec2);
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  return chain_unary(a, e, e, e);
}

Jet2 log(const Jet2& a) {
  if (a.value() <= 0.0) throw DomainError("log of a non-positive value");
  const double inv = 1.0 / a.value();
  return chain_unary(a, std::log(a.value()), inv, -inv * inv);
}

Jet2 sqrt(const Jet2& a) {
  if (a.value() <= 0.0) throw DomainError("sqrt of a non-positive value");
  const double s = std::sqrt(a.value());
  return chain_unary(a, s, 0.5 / s, -0.25 / (s * a.value()));
}

Jet2 tanh(const Jet2& a) {
  const double t = std::tanh(a.value());
  const double sech2 = 1.0 - t * t;
  return chain_unary(a, t, sech2, -2.0 * t * sech2);
}

Jet2 abs(const Jet2& a) {
  if (a.value() == 0.0) throw DomainError("abs is not differentiable at zero");
  const double s = a.value() > 0.0 ? 1.0 : -1.0;
  return chain_unary(a, std::abs(a.value()), s, 0.0);
}

Jet2 pow_int(const Jet2& a, long long n) {
  if (n == 0) return Jet2::constant(1.0, a.dim());
  const bool neg = n < 0;
  unsigned long long k = neg ? static_cast<unsigned long long>(-n) : static_cast<unsigned long long>(n);
  Jet2 r = a;
  for (unsigned long long i = 1; i < k; ++i) r = r * a;
  if (neg) r = Jet2::constant(1.0, a.dim()) / r;
  return r;
}

Jet2 pow_real(const Jet2& a, double e) {
  if (a.value() <= 0.0) throw DomainError("non-integer power of a non-positive base");
  const double f = std::pow(a.value(), e);
  const double df = e * std::pow(a.value(), e - 1.0);
  const double ddf = e * (e - 1.0) * std::pow(a.value(), e - 2.0);
  return chain_unary(a, f, df, ddf);
}

}  // namespace statsub
