#include "statsub/structure.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "statsub/errors.hpp"

namespace statsub {

void Chart::validate() const {
  if (coordinates.empty()) throw ValidationError("chart has no coordinates");
  std::set<std::string> seen;
  for (const auto& name : coordinates) {
    if (name.empty()) throw ValidationError("empty coordinate name");
    if (!seen.insert(name).second)
      throw ValidationError("duplicate coordinate name '" + name + "'");
  }
}

namespace {
int upper_index(int d, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * d - i * (i - 1) / 2 + (j - i);
}
}  // namespace

MetricField MetricField::identity(const Chart& chart) {
  MetricField m;
  m.d_ = chart.dimension();
  m.upper_.resize(m.d_ * (m.d_ + 1) / 2);
  for (int i = 0; i < m.d_; ++i)
    for (int j = i; j < m.d_; ++j)
      m.upper_[upper_index(m.d_, i, j)] =
          Expression::parse(i == j ? "1" : "0", chart.coordinates);
  m.rebuild_derivatives();
  return m;
}

MetricField MetricField::from_entries(const Chart& chart,
                                      const std::map<std::pair<int, int>, Expression>& entries) {
  MetricField m = identity(chart);
  for (const auto& [ij, expr] : entries) {
    const auto [i, j] = ij;
    if (i < 0 || j < 0 || i >= m.d_ || j >= m.d_)
      throw ValidationError("metric index out of range");
    m.upper_[upper_index(m.d_, i, j)] = expr;
  }
  m.rebuild_derivatives();
  return m;
}

void MetricField::rebuild_derivatives() {
  const int packed = d_ * (d_ + 1) / 2;
  dupper_.resize(static_cast<std::size_t>(d_) * packed);
  for (int k = 0; k < d_; ++k)
    for (int p = 0; p < packed; ++p)
      dupper_[static_cast<std::size_t>(k) * packed + p] = upper_[p].derivative(k);
}

const Expression& MetricField::entry(int i, int j) const {
  return upper_[upper_index(d_, i, j)];
}

Mat<double> MetricField::eval_values(std::span<const double> x) const {
  Mat<double> g(d_, d_, 0.0);
  for (int i = 0; i < d_; ++i)
    for (int j = i; j < d_; ++j) g(i, j) = g(j, i) = upper_[upper_index(d_, i, j)].eval(x);
  return g;
}

Mat<Jet2> MetricField::eval_jets(std::span<const double> x) const {
  Mat<Jet2> g(d_, d_, Jet2::constant(0.0, d_));
  for (int i = 0; i < d_; ++i)
    for (int j = i; j < d_; ++j) g(i, j) = g(j, i) = upper_[upper_index(d_, i, j)].eval_jet(x);
  return g;
}

Mat<Jet2> MetricField::eval_derivative_jets(int k, std::span<const double> x) const {
  const int packed = d_ * (d_ + 1) / 2;
  Mat<Jet2> dg(d_, d_, Jet2::constant(0.0, d_));
  for (int i = 0; i < d_; ++i)
    for (int j = i; j < d_; ++j)
      dg(i, j) = dg(j, i) =
          dupper_[static_cast<std::size_t>(k) * packed + upper_index(d_, i, j)].eval_jet(x);
  return dg;
}

ConnectionField ConnectionField::levi_civita() {
  ConnectionField c;
  c.kind_ = Kind::LeviCivita;
  return c;
}

ConnectionField ConnectionField::explicit_coeffs(
    const Chart& chart, const std::map<std::tuple<int, int, int>, Expression>& entries) {
  ConnectionField c;
  c.kind_ = Kind::Explicit;
  c.d_ = chart.dimension();
  const Expression zero = Expression::parse("0", chart.coordinates);
  c.coeffs_.assign(c.d_ * c.d_ * c.d_, zero);
  for (const auto& [kij, expr] : entries) {
    const auto [k, i, j] = kij;
    if (k < 0 || i < 0 || j < 0 || k >= c.d_ || i >= c.d_ || j >= c.d_)
      throw ValidationError("connection index out of range");
    c.coeffs_[(k * c.d_ + i) * c.d_ + j] = expr;
  }
  return c;
}

ConnectionField ConnectionField::levi_civita_plus(
    const Chart& chart, const std::map<std::tuple<int, int, int>, Expression>& cubic) {
  ConnectionField c;
  c.kind_ = Kind::LeviCivitaPlus;
  c.d_ = chart.dimension();
  const Expression zero = Expression::parse("0", chart.coordinates);
  c.coeffs_.assign(c.d_ * c.d_ * c.d_, zero);
  for (const auto& [lij, expr] : cubic) {
    const auto [l, i, j] = lij;
    if (l < 0 || i < 0 || j < 0 || l >= c.d_ || i >= c.d_ || j >= c.d_)
      throw ValidationError("cubic form index out of range");
    const int idx[3] = {l, i, j};
    int perm[3] = {0, 1, 2};
    std::sort(perm, perm + 3);
    do {
      c.coeffs_[(idx[perm[0]] * c.d_ + idx[perm[1]]) * c.d_ + idx[perm[2]]] = expr;
    } while (std::next_permutation(perm, perm + 3));
  }
  return c;
}

ConnectionField dual_connection(const ConnectionField& nabla) {
  ConnectionField c;
  c.kind_ = ConnectionField::Kind::Dual;
  c.base_ = std::make_shared<const ConnectionField>(nabla);
  return c;
}

namespace {

// Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij) from exact
// derivative jets of the metric.
Gamma levi_civita_gamma(const Mat<Jet2>& ginv, const std::vector<Mat<Jet2>>& dg) {
  const int d = ginv.rows();
  Gamma out(d, Jet2::constant(0.0, d));
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        Jet2 acc = Jet2::constant(0.0, d);
        for (int l = 0; l < d; ++l)
          acc += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        out(k, i, j) = 0.5 * acc;
        out(k, j, i) = out(k, i, j);
      }
    }
  }
  return out;
}

}  // namespace

Gamma ConnectionField::coefficients(const MetricField& metric, const Mat<Jet2>& g,
                                    const Mat<Jet2>& ginv, std::span<const double> x) const {
  const int d = g.rows();
  Gamma out(d, Jet2::constant(0.0, d));
  switch (kind_) {
    case Kind::Explicit: {
      for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            out(k, i, j) = coeffs_[(k * d_ + i) * d_ + j].eval_jet(x);
      return out;
    }
    case Kind::LeviCivita: {
      std::vector<Mat<Jet2>> dg;
      dg.reserve(d);
      for (int k = 0; k < d; ++k) dg.push_back(metric.eval_derivative_jets(k, x));
      return levi_civita_gamma(ginv, dg);
    }
    case Kind::LeviCivitaPlus: {
      std::vector<Mat<Jet2>> dg;
      dg.reserve(d);
      for (int k = 0; k < d; ++k) dg.push_back(metric.eval_derivative_jets(k, x));
      out = levi_civita_gamma(ginv, dg);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          Vec<Jet2> klow(d, Jet2::constant(0.0, d));
          for (int l = 0; l < d; ++l) klow[l] = coeffs_[(l * d_ + i) * d_ + j].eval_jet(x);
          for (int k = 0; k < d; ++k) {
            Jet2 acc = Jet2::constant(0.0, d);
            for (int l = 0; l < d; ++l) acc += ginv(k, l) * klow[l];
            out(k, i, j) += acc;
          }
        }
      return out;
    }
    case Kind::Dual: {
      // d_k g_ij = Gamma^l_ki g_lj + Gamma*^l_kj g_il, solved for Gamma*.
      const Gamma base = base_->coefficients(metric, g, ginv, x);
      Mat<Jet2> gm = g;
      for (int k = 0; k < d; ++k) {
        const Mat<Jet2> dgk = metric.eval_derivative_jets(k, x);
        for (int j = 0; j < d; ++j) {
          Vec<Jet2> rhs(d, Jet2::constant(0.0, d));
          for (int i = 0; i < d; ++i) {
            Jet2 r = dgk(i, j);
            for (int l = 0; l < d; ++l) r -= base(l, k, i) * g(l, j);
            rhs[i] = r;
          }
          Vec<Jet2> col = solve(gm, rhs);
          for (int l = 0; l < d; ++l) out(l, k, j) = col[l];
        }
      }
      return out;
    }
  }
  return out;
}

PointGeometry point_geometry(const StatisticalStructure& s, std::span<const double> x,
                             double spd_tol) {
  if (static_cast<int>(x.size()) != s.dimension())
    throw ValidationError("point dimension does not match the chart");
  PointGeometry pg;
  pg.structure = &s;
  pg.x.assign(x.begin(), x.end());
  pg.g = s.metric.eval_jets(x);

  const int d = pg.dim();
  Mat<double> gval(d, d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) gval(i, j) = pg.g(i, j).value();
  const auto eig = sym_eigenvalues(gval);
  pg.metric_min_eigenvalue = eig.front();
  if (!(eig.front() > spd_tol))
    throw DegenerateMetric("metric is not positive definite at the point (min eigenvalue " +
                           std::to_string(eig.front()) + ")");

  pg.ginv = inverse(pg.g);
  pg.gamma = s.nabla.coefficients(s.metric, pg.g, pg.ginv, x);
  pg.gamma_star = s.nabla_star().coefficients(s.metric, pg.g, pg.ginv, x);

  std::vector<Vec<Jet2>> coord(d, Vec<Jet2>(d, Jet2::constant(0.0, d)));
  for (int i = 0; i < d; ++i) coord[i][i] = Jet2::constant(1.0, d);
  pg.frame = gram_schmidt(pg.g, std::move(coord));
  return pg;
}

StatisticalCheck check_statistical(const PointGeometry& pg, double tol) {
  const int d = pg.dim();
  StatisticalCheck out;
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        out.torsion_max = std::max(
            out.torsion_max, std::abs(pg.gamma(k, i, j).value() - pg.gamma(k, j, i).value()));

  // (nabla_i g)(j,k) = d_i g_jk - Gamma^l_ij g_lk - Gamma^l_ik g_jl
  auto nabla_g = [&](int i, int j, int k) {
    double r = pg.g(j, k).grad(i);
    for (int l = 0; l < d; ++l) {
      r -= pg.gamma(l, i, j).value() * pg.g(l, k).value();
      r -= pg.gamma(l, i, k).value() * pg.g(j, l).value();
    }
    return r;
  };
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = 0; k < d; ++k)
        out.codazzi_max = std::max(out.codazzi_max, std::abs(nabla_g(i, j, k) - nabla_g(j, i, k)));

  // d_k g_ij - Gamma^l_ki g_lj - Gamma*^l_kj g_il
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double r = pg.g(i, j).grad(k);
        for (int l = 0; l < d; ++l) {
          r -= pg.gamma(l, k, i).value() * pg.g(l, j).value();
          r -= pg.gamma_star(l, k, j).value() * pg.g(i, l).value();
        }
        out.conjugation_max = std::max(out.conjugation_max, std::abs(r));
      }

  out.statistical =
      out.torsion_max < tol && out.codazzi_max < tol && out.conjugation_max < tol;
  return out;
}

}  // namespace statsub
