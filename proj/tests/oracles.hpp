#pragma once

// Shared test oracles.  Everything here is written against definitions or
// closed forms only — finite differences, independently derived warped-product
// quantities, hand-built structures — so the suites can arbitrate the
// library's derived values instead of comparing it with itself.

#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "statsub/expr.hpp"
#include "statsub/manifest.hpp"
#include "statsub/structure.hpp"

namespace oracles {

using statsub::Chart;
using statsub::ConnectionField;
using statsub::Expression;
using statsub::MetricField;
using statsub::StatisticalStructure;

inline double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit(rng);
}

inline std::vector<double> random_point(std::mt19937_64& rng, int dim, double lo = -1.0,
                                        double hi = 1.0) {
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (double& v : x) v = uniform(rng, lo, hi);
  return x;
}

// ---- central finite differences -------------------------------------------

template <class F>
double fd_gradient(F&& f, std::vector<double> x, int i, double h = 1e-4) {
  x[static_cast<std::size_t>(i)] += h;
  const double up = f(x);
  x[static_cast<std::size_t>(i)] -= 2 * h;
  const double dn = f(x);
  return (up - dn) / (2 * h);
}

template <class F>
double fd_hessian(F&& f, std::vector<double> x, int i, int j, double h = 1e-4) {
  const auto si = static_cast<std::size_t>(i);
  const auto sj = static_cast<std::size_t>(j);
  if (i == j) {
    const double mid = f(x);
    x[si] += h;
    const double up = f(x);
    x[si] -= 2 * h;
    const double dn = f(x);
    return (up - 2 * mid + dn) / (h * h);
  }
  std::vector<double> p = x;
  p[si] += h;
  p[sj] += h;
  const double pp = f(p);
  p[sj] -= 2 * h;
  const double pm = f(p);
  p[si] -= 2 * h;
  const double mm = f(p);
  p[sj] += 2 * h;
  const double mp = f(p);
  return (pp - pm - mp + mm) / (4 * h * h);
}

// ---- random expressions -----------------------------------------------------

// Smooth everywhere on [-2, 2]^d: polynomials, sin/cos/tanh, scaled exp, and
// divisions with strictly positive denominators.
inline std::string random_expr(std::mt19937_64& rng, const std::vector<std::string>& coords,
                               int depth = 2) {
  auto coord = [&]() { return coords[static_cast<std::size_t>(rng() % coords.size())]; };
  auto num = [&]() {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", uniform(rng, -2.0, 2.0));
    return std::string(buf);
  };
  if (depth <= 0) {
    switch (rng() % 3) {
      case 0: return coord();
      case 1: return num();
      default: return coord() + "^2";
    }
  }
  const std::string a = random_expr(rng, coords, depth - 1);
  const std::string b = random_expr(rng, coords, depth - 1);
  switch (rng() % 8) {
    case 0: return "(" + a + " + " + b + ")";
    case 1: return "(" + a + " - " + b + ")";
    case 2: return "(" + a + ")*(" + b + ")";
    case 3: return "sin(" + a + ")";
    case 4: return "cos(" + a + ")";
    case 5: return "tanh(" + a + ")";
    case 6: return "exp(0.3*(" + a + "))";
    default: return "(" + a + ")/(2 + (" + b + ")^2)";
  }
}

// ---- random statistical structures -----------------------------------------

inline Chart make_chart(int dim) {
  Chart chart;
  for (int i = 1; i <= dim; ++i) chart.coordinates.push_back("x" + std::to_string(i));
  return chart;
}

// Diagonal metric with entries 1 + c*x_k^2 (positive everywhere) and a
// connection of the form Levi-Civita plus a random totally symmetric cubic
// term, which is a statistical structure by construction.
inline StatisticalStructure random_statistical_structure(std::mt19937_64& rng, int dim) {
  StatisticalStructure s;
  s.chart = make_chart(dim);
  const auto& c = s.chart.coordinates;

  std::map<std::pair<int, int>, Expression> metric;
  if (rng() % 2 == 0) {
    for (int k = 0; k < dim; ++k) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "1 + %.3f*%s^2", uniform(rng, 0.1, 0.5),
                    c[static_cast<std::size_t>(k)].c_str());
      metric[{k, k}] = Expression::parse(buf, c);
    }
  }
  s.metric = metric.empty() ? MetricField::identity(s.chart)
                            : MetricField::from_entries(s.chart, metric);

  std::map<std::tuple<int, int, int>, Expression> cubic;
  const int entries = 2 + static_cast<int>(rng() % 3);
  for (int e = 0; e < entries; ++e) {
    int i = static_cast<int>(rng() % static_cast<unsigned>(dim));
    int j = static_cast<int>(rng() % static_cast<unsigned>(dim));
    int k = static_cast<int>(rng() % static_cast<unsigned>(dim));
    char buf[64];
    if (rng() % 2 == 0)
      std::snprintf(buf, sizeof(buf), "%.3f", uniform(rng, -0.3, 0.3));
    else
      std::snprintf(buf, sizeof(buf), "%.3f*%s", uniform(rng, -0.3, 0.3),
                    c[static_cast<std::size_t>(rng() % c.size())].c_str());
    cubic[{i, j, k}] = Expression::parse(buf, c);
  }
  s.nabla = ConnectionField::levi_civita_plus(s.chart, cubic);
  s.convention = +1;
  return s;
}

inline StatisticalStructure trivial_structure(std::mt19937_64& rng, int dim) {
  StatisticalStructure s = random_statistical_structure(rng, dim);
  s.nabla = ConnectionField::levi_civita();
  return s;
}

// ---- warped-product family ---------------------------------------------------

// Source R^{1+m} with metric diag(1, f^2, ..., f^2), f = 1 + a*x1^2, submerged
// onto the first coordinate.  Closed forms used by the suites:
//   f'/f             = 2*a*x1 / (1 + a*x1^2)
//   T_{E_a}E_b       = -(f'/f) delta_ab d/dx1   (orthonormal fiber frame)
//   sum |T_{E_a}E_b|^2 = m (f'/f)^2,   N = -m (f'/f) d/dx1,   A = 0
inline std::string warped_manifest_text(int fiber_dim, double a, int random_count,
                                        unsigned long long seed) {
  char fbuf[64];
  std::snprintf(fbuf, sizeof(fbuf), "(1 + %.17g*x1^2)^2", a);
  std::string metric;
  for (int k = 2; k <= fiber_dim + 1; ++k) {
    if (!metric.empty()) metric += ", ";
    metric += "\"g_" + std::to_string(k) + "_" + std::to_string(k) + "\": \"" + fbuf + "\"";
  }
  return "{\n"
         "  \"name\": \"warped-family\",\n"
         "  \"source\": { \"dimension\": " + std::to_string(fiber_dim + 1) +
         ", \"metric\": { " + metric + " } },\n"
         "  \"target\": { \"dimension\": 1, \"coordinates\": [\"t\"] },\n"
         "  \"submersion\": { \"map\": [\"x1\"] },\n"
         "  \"evaluation\": { \"random\": { \"count\": " + std::to_string(random_count) +
         ", \"seed\": " + std::to_string(seed) + " } }\n"
         "}\n";
}

inline double warped_ratio(double a, double x1) {
  return 2.0 * a * x1 / (1.0 + a * x1 * x1);
}

// ---- published spans for the averaging submersion ----------------------------

inline std::vector<std::vector<double>> published_vertical_span() {
  const double s = 1.0 / std::sqrt(2.0);
  return {{-s, s, 0, 0, 0, 0}, {0, 0, -s, s, 0, 0}, {0, 0, 0, 0, -s, s}};
}

inline std::vector<std::vector<double>> published_horizontal_span() {
  const double s = 1.0 / std::sqrt(2.0);
  return {{s, s, 0, 0, 0, 0}, {0, 0, s, s, 0, 0}, {0, 0, 0, 0, s, s}};
}

}  // namespace oracles
