#include "statsub/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace statsub {

std::vector<double> sym_eigenvalues(Mat<double> a) {
  const int n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

namespace {

// Euclidean orthonormalization of a spanning set.
std::vector<Vec<double>> orthonormalize(std::vector<Vec<double>> v) {
  Mat<double> id(static_cast<int>(v[0].size()), static_cast<int>(v[0].size()), 0.0);
  for (int i = 0; i < id.rows(); ++i) id(i, i) = 1.0;
  return gram_schmidt(id, std::move(v));
}

}  // namespace

double max_principal_angle(const std::vector<Vec<double>>& span_a,
                           const std::vector<Vec<double>>& span_b) {
  if (span_a.size() != span_b.size()) return std::acos(0.0);  // different dimensions: 90 degrees
  const auto qa = orthonormalize(span_a);
  const auto qb = orthonormalize(span_b);
  const int k = static_cast<int>(qa.size());
  Mat<double> m(k, k, 0.0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < qa[i].size(); ++c) acc += qa[i][c] * qb[j][c];
      m(i, j) = acc;
    }
  // Eigenvalues of m m^T are the squared cosines of the principal angles.
  Mat<double> mmt(k, k, 0.0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      double acc = 0.0;
      for (int c = 0; c < k; ++c) acc += m(i, c) * m(j, c);
      mmt(i, j) = acc;
    }
  const auto ev = sym_eigenvalues(mmt);
  double c2 = std::clamp(ev.front(), 0.0, 1.0);
  return std::acos(std::sqrt(c2));
}

}  // namespace statsub
