#pragma once

#include <cmath>
#include <vector>

#include "statsub/errors.hpp"
#include "statsub/jet.hpp"

namespace statsub {

// Small dense matrix over a generic scalar.  The geometry code instantiates
// it with double and with Jet2 so that derived fields (inverse metrics,
// orthonormal frames, connection coefficients) keep exact derivatives.
template <class T>
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols, T fill) : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int i, int j) { return a_[i * cols_ + j]; }
  const T& operator()(int i, int j) const { return a_[i * cols_ + j]; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<T> a_;
};

template <class T>
using Vec = std::vector<T>;

template <class T>
Vec<T> mat_vec(const Mat<T>& m, const Vec<T>& v) {
  Vec<T> r(m.rows(), constant_like(v[0], 0.0));
  for (int i = 0; i < m.rows(); ++i) {
    T acc = constant_like(v[0], 0.0);
    for (int j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
    r[i] = acc;
  }
  return r;
}

// Solves a x = b by Gauss elimination.  Pivots are chosen on the value part
// only, so the pivot pattern of a jet-valued solve matches the plain solve at
// the same point and the result stays a smooth function of the point.
template <class T>
Vec<T> solve(Mat<T> a, Vec<T> b) {
  const int n = a.rows();
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(value_of(a(col, col)));
    for (int r = col + 1; r < n; ++r) {
      const double cand = std::abs(value_of(a(r, col)));
      if (cand > best) {
        best = cand;
        piv = r;
      }
    }
    if (best == 0.0) throw RankDeficient("singular linear system");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < n; ++r) {
      T f = a(r, col) / a(col, col);
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  Vec<T> x(n, constant_like(b[0], 0.0));
  for (int i = n - 1; i >= 0; --i) {
    T acc = b[i];
    for (int j = i + 1; j < n; ++j) acc -= a(i, j) * x[j];
    x[i] = acc / a(i, i);
  }
  return x;
}

template <class T>
Mat<T> inverse(const Mat<T>& a) {
  const int n = a.rows();
  Mat<T> inv(n, n, constant_like(a(0, 0), 0.0));
  for (int col = 0; col < n; ++col) {
    Vec<T> e(n, constant_like(a(0, 0), 0.0));
    e[col] = constant_like(a(0, 0), 1.0);
    Vec<T> x = solve(a, e);
    for (int i = 0; i < n; ++i) inv(i, col) = x[i];
  }
  return inv;
}

template <class T>
T dot(const Mat<T>& g, const Vec<T>& u, const Vec<T>& v) {
  T acc = constant_like(u[0], 0.0);
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) acc += u[i] * g(i, j) * v[j];
  return acc;
}

using std::sqrt;  // so the templates below find sqrt(double) unqualified

// Gram-Schmidt against the bilinear form g, in the order the vectors are
// given.  Throws DegenerateMetric when a vector's g-norm is not positive,
// which covers both indefinite metrics and dependent inputs.
template <class T>
std::vector<Vec<T>> gram_schmidt(const Mat<T>& g, std::vector<Vec<T>> v) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    for (std::size_t b = 0; b < k; ++b) {
      T c = dot(g, v[k], v[b]);
      for (std::size_t i = 0; i < v[k].size(); ++i) v[k][i] -= c * v[b][i];
    }
    T n2 = dot(g, v[k], v[k]);
    if (!(value_of(n2) > 0.0)) throw DegenerateMetric("non-positive norm in Gram-Schmidt");
    T n = sqrt(n2);
    for (std::size_t i = 0; i < v[k].size(); ++i) v[k][i] = v[k][i] / n;
  }
  return v;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> sym_eigenvalues(Mat<double> a);

// Largest principal angle (radians) between the column spans of two sets of
// vectors, computed from the eigenvalues of the cross-Gram matrix.
double max_principal_angle(const std::vector<Vec<double>>& span_a,
                           const std::vector<Vec<double>>& span_b);

}  // namespace statsub
