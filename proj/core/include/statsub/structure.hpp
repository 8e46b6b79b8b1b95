#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "statsub/expr.hpp"
#include "statsub/jet.hpp"
#include "statsub/linalg.hpp"

namespace statsub {

// A single global coordinate chart; every field on the manifold is expressed
// in these coordinates.
struct Chart {
  std::vector<std::string> coordinates;

  int dimension() const { return static_cast<int>(coordinates.size()); }
  void validate() const;  // unique, non-empty names
};

// Rank-3 array of jets indexed (k, i, j); used for connection coefficients
// Gamma^k_ij where i is the differentiation direction.
class Gamma {
 public:
  Gamma() = default;
  Gamma(int dim, const Jet2& fill) : d_(dim), a_(dim * dim * dim, fill) {}

  int dim() const { return d_; }
  Jet2& operator()(int k, int i, int j) { return a_[(k * d_ + i) * d_ + j]; }
  const Jet2& operator()(int k, int i, int j) const { return a_[(k * d_ + i) * d_ + j]; }

 private:
  int d_ = 0;
  std::vector<Jet2> a_;
};

// Symmetric metric field, stored as expressions for the upper triangle.
class MetricField {
 public:
  MetricField() = default;

  static MetricField identity(const Chart& chart);
  // Starts from the identity and overrides the given (i, j) entries, 0-based.
  static MetricField from_entries(const Chart& chart,
                                  const std::map<std::pair<int, int>, Expression>& entries);

  const Expression& entry(int i, int j) const;

  Mat<double> eval_values(std::span<const double> x) const;
  Mat<Jet2> eval_jets(std::span<const double> x) const;
  // Jets of d_k g_ij, evaluated from the symbolic derivatives of the metric
  // entries so the result is exact to second order (a demoted jet of g would
  // lose the Hessian that frame fields and connection coefficients need).
  Mat<Jet2> eval_derivative_jets(int k, std::span<const double> x) const;

  int dimension() const { return d_; }

 private:
  void rebuild_derivatives();

  int d_ = 0;
  std::vector<Expression> upper_;   // packed row-major upper triangle
  std::vector<Expression> dupper_;  // derivative per coordinate, same packing
};

// A connection is either given by explicit coefficient expressions, derived
// from the metric (Levi-Civita), or obtained as the conjugate of another
// connection with respect to the metric.  Coefficients are always produced
// pointwise as jets, so curvature (which needs their first derivatives) is
// exact for every variant.
class ConnectionField {
 public:
  enum class Kind { LeviCivita, LeviCivitaPlus, Explicit, Dual };

  ConnectionField() : kind_(Kind::LeviCivita) {}

  static ConnectionField levi_civita();
  // Entries are (k, i, j) for Gamma^k_ij, 0-based; missing entries are zero.
  static ConnectionField explicit_coeffs(
      const Chart& chart, const std::map<std::tuple<int, int, int>, Expression>& entries);
  // Levi-Civita plus a totally symmetric lowered cubic form K_{lij}:
  // Gamma^k_ij = LC^k_ij + g^{kl} K_{lij}.  Keys are unordered index triples;
  // each given entry is copied to all permutations, which makes the result a
  // statistical connection by construction.
  static ConnectionField levi_civita_plus(
      const Chart& chart, const std::map<std::tuple<int, int, int>, Expression>& cubic);

  Kind kind() const { return kind_; }
  const ConnectionField& base() const { return *base_; }

  // Gamma^k_ij jets at x; g and ginv are the metric jets at the same point,
  // metric supplies exact derivative jets where the kind needs them.
  Gamma coefficients(const MetricField& metric, const Mat<Jet2>& g, const Mat<Jet2>& ginv,
                     std::span<const double> x) const;

 private:
  Kind kind_;
  int d_ = 0;
  std::vector<Expression> coeffs_;  // dense d^3 when explicit
  std::shared_ptr<const ConnectionField> base_;

  friend ConnectionField dual_connection(const ConnectionField&);
};

// Conjugate connection with respect to the metric the structure carries:
// W g(U,V) = g(nabla_W U, V) + g(U, nabla*_W V).
ConnectionField dual_connection(const ConnectionField& nabla);

// (M, g, nabla) together with the curvature sign convention epsilon in {+1,-1}:
//   R(X,Y)Z = epsilon * ([nabla_X, nabla_Y] Z - nabla_[X,Y] Z).
struct StatisticalStructure {
  Chart chart;
  MetricField metric;
  ConnectionField nabla;
  int convention = +1;

  ConnectionField nabla_star() const { return dual_connection(nabla); }
  int dimension() const { return chart.dimension(); }
};

// Everything the pointwise operations need at one chart point: metric jets,
// inverse metric, both connections' coefficients, and a g-orthonormal frame
// obtained by Gram-Schmidt on the coordinate frame in index order.  Frame
// vectors are jet fields, so they may be differentiated.
struct PointGeometry {
  const StatisticalStructure* structure = nullptr;
  std::vector<double> x;
  Mat<Jet2> g, ginv;
  Gamma gamma, gamma_star;
  std::vector<Vec<Jet2>> frame;
  double metric_min_eigenvalue = 0.0;

  int dim() const { return static_cast<int>(x.size()); }
};

// Evaluates the structure at x.  Raises DegenerateMetric when the smallest
// metric eigenvalue does not exceed spd_tol.
PointGeometry point_geometry(const StatisticalStructure& s, std::span<const double> x,
                             double spd_tol = 1e-10);

// Diagnostics for the defining properties of a statistical structure at one
// point: torsion of nabla, symmetry of (nabla_U g)(V, W) in U and V (the
// Codazzi condition), and the conjugation residual of the derived dual.
struct StatisticalCheck {
  double torsion_max = 0.0;      // max |Gamma^k_ij - Gamma^k_ji|
  double codazzi_max = 0.0;      // max |(nabla_i g)(j,k) - (nabla_j g)(i,k)|
  double conjugation_max = 0.0;  // residual of the conjugation identity
  bool statistical = false;
};

StatisticalCheck check_statistical(const PointGeometry& pg, double tol = 1e-8);

}  // namespace statsub
