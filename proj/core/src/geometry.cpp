#include "statsub/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "statsub/errors.hpp"

namespace statsub {

TensorValue TensorValue::zeros(int dim, std::vector<Variance> signature) {
  TensorValue t;
  t.dim = dim;
  t.signature = std::move(signature);
  std::size_t n = 1;
  for (std::size_t r = 0; r < t.signature.size(); ++r) n *= static_cast<std::size_t>(dim);
  t.data.assign(n, 0.0);
  return t;
}

std::size_t TensorValue::offset(std::initializer_list<int> idx) const {
  std::size_t o = 0;
  for (int i : idx) o = o * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i);
  return o;
}

std::vector<double> values_of(const JVec& u) {
  std::vector<double> v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i].value();
  return v;
}

JVec covariant_derivative(const Gamma& gamma, const JVec& u, const JVec& w) {
  const int d = gamma.dim();
  JVec out(d, Jet2::constant(0.0, d));
  for (int k = 0; k < d; ++k) {
    Jet2 acc = Jet2::constant(0.0, d);
    for (int m = 0; m < d; ++m) {
      acc += u[m] * Jet2::partial(w[k], m);
      for (int j = 0; j < d; ++j) acc += gamma(k, m, j) * u[m] * w[j];
    }
    out[k] = acc;
  }
  return out;
}

Jet2 g_dot(const PointGeometry& pg, const JVec& u, const JVec& v) {
  const int d = pg.dim();
  Jet2 acc = Jet2::constant(0.0, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) acc += pg.g(i, j) * u[i] * v[j];
  return acc;
}

double g_dot_value(const PointGeometry& pg, const std::vector<double>& u,
                   const std::vector<double>& v) {
  const int d = pg.dim();
  double acc = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) acc += pg.g(i, j).value() * u[i] * v[j];
  return acc;
}

TensorValue curvature_tensor(const PointGeometry& pg, const Gamma& gamma, int convention) {
  const int d = pg.dim();
  using V = TensorValue::Variance;
  TensorValue riem = TensorValue::zeros(d, {V::Upper, V::Lower, V::Lower, V::Lower});
  const double eps = static_cast<double>(convention);
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          double v = gamma(l, j, k).grad(i) - gamma(l, i, k).grad(j);
          for (int m = 0; m < d; ++m)
            v += gamma(l, i, m).value() * gamma(m, j, k).value() -
                 gamma(l, j, m).value() * gamma(m, i, k).value();
          riem.at({l, i, j, k}) = eps * v;
        }
  return riem;
}

std::vector<double> curvature_apply(const TensorValue& riem, const std::vector<double>& u,
                                    const std::vector<double>& v, const std::vector<double>& w) {
  const int d = riem.dim;
  std::vector<double> out(d, 0.0);
  for (int l = 0; l < d; ++l) {
    double acc = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) acc += riem.at({l, i, j, k}) * u[i] * v[j] * w[k];
    out[l] = acc;
  }
  return out;
}

double curvature_pair(const PointGeometry& pg, const TensorValue& riem,
                      const std::vector<double>& u, const std::vector<double>& v,
                      const std::vector<double>& w, const std::vector<double>& z) {
  return g_dot_value(pg, curvature_apply(riem, u, v, w), z);
}

RicciScalar ricci_and_scalar(const PointGeometry& pg, const TensorValue& riem) {
  const int d = pg.dim();
  RicciScalar rs;
  rs.ricci = Mat<double>(d, d, 0.0);
  std::vector<std::vector<double>> frame(d);
  for (int a = 0; a < d; ++a) frame[a] = values_of(pg.frame[a]);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double acc = 0.0;
      for (int a = 0; a < d; ++a) {
        // g(R(e_a, d_i) d_j, e_a)
        for (int l = 0; l < d; ++l) {
          double rl = 0.0;
          for (int p = 0; p < d; ++p) rl += riem.at({l, p, i, j}) * frame[a][p];
          for (int q = 0; q < d; ++q) acc += pg.g(l, q).value() * rl * frame[a][q];
        }
      }
      rs.ricci(i, j) = acc;
    }
  rs.scalar = 0.0;
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) rs.scalar += frame[a][i] * frame[a][j] * rs.ricci(i, j);
  return rs;
}

JVec lie_bracket(const JVec& u, const JVec& v) {
  const int d = static_cast<int>(u.size());
  JVec out(d, Jet2::constant(0.0, d));
  for (int k = 0; k < d; ++k) {
    Jet2 acc = Jet2::constant(0.0, d);
    for (int m = 0; m < d; ++m)
      acc += u[m] * Jet2::partial(v[k], m) - v[m] * Jet2::partial(u[k], m);
    out[k] = acc;
  }
  return out;
}

Mat<double> lie_derivative_metric(const PointGeometry& pg, const JVec& v) {
  const int d = pg.dim();
  Mat<double> lie(d, d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double acc = 0.0;
      for (int m = 0; m < d; ++m) {
        acc += v[m].value() * pg.g(i, j).grad(m);
        acc += pg.g(m, j).value() * v[m].grad(i);
        acc += pg.g(i, m).value() * v[m].grad(j);
      }
      lie(i, j) = acc;
    }
  return lie;
}

Mat<double> covariant_hessian(const PointGeometry& pg, const Jet2& psi, const Gamma& gamma) {
  const int d = pg.dim();
  Mat<double> hess(d, d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double acc = psi.hess(i, j);
      for (int k = 0; k < d; ++k) acc -= gamma(k, i, j).value() * psi.grad(k);
      hess(i, j) = acc;
    }
  return hess;
}

double laplacian(const PointGeometry& pg, const Mat<double>& hess) {
  const int d = pg.dim();
  double acc = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) acc += pg.ginv(i, j).value() * hess(i, j);
  return acc;
}

double divergence(const PointGeometry& pg, const JVec& v, const Gamma& gamma) {
  const int d = pg.dim();
  double acc = 0.0;
  for (int a = 0; a < d; ++a) {
    JVec der = covariant_derivative(gamma, pg.frame[a], v);
    acc += g_dot(pg, der, pg.frame[a]).value();
  }
  return acc;
}

namespace {

Mat<double> to_frame(const PointGeometry& pg, const Mat<double>& bilinear) {
  const int d = pg.dim();
  Mat<double> out(d, d, 0.0);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double acc = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          acc += pg.frame[a][i].value() * pg.frame[b][j].value() * bilinear(i, j);
      out(a, b) = acc;
    }
  return out;
}

}  // namespace

EinsteinCheck einstein_check_matrix(const Mat<double>& ricci_frame, double tol) {
  const int d = ricci_frame.rows();
  EinsteinCheck ec;
  double lo = ricci_frame(0, 0), hi = ricci_frame(0, 0), sum = 0.0, scale = 1.0;
  for (int a = 0; a < d; ++a) {
    sum += ricci_frame(a, a);
    lo = std::min(lo, ricci_frame(a, a));
    hi = std::max(hi, ricci_frame(a, a));
    for (int b = 0; b < d; ++b) {
      scale = std::max(scale, std::abs(ricci_frame(a, b)));
      if (a != b) ec.offdiag_max = std::max(ec.offdiag_max, std::abs(ricci_frame(a, b)));
    }
  }
  ec.factor = sum / d;
  ec.diag_spread = hi - lo;
  ec.is_einstein = ec.diag_spread <= tol * scale && ec.offdiag_max <= tol * scale;
  return ec;
}

EinsteinCheck einstein_check(const PointGeometry& pg, const Mat<double>& ricci, double tol) {
  return einstein_check_matrix(to_frame(pg, ricci), tol);
}

}  // namespace statsub
