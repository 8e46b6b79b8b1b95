#pragma once

#include <vector>

#include "statsub/structure.hpp"

namespace statsub {

// Coordinate components of a vector field at a point, as jets.
using JVec = Vec<Jet2>;

// Pointwise tensor with explicit index variance tags, row-major over the
// indices in signature order.
struct TensorValue {
  enum class Variance { Upper, Lower };

  int dim = 0;
  std::vector<Variance> signature;
  std::vector<double> data;

  static TensorValue zeros(int dim, std::vector<Variance> signature);

  double& at(std::initializer_list<int> idx) { return data[offset(idx)]; }
  double at(std::initializer_list<int> idx) const { return data[offset(idx)]; }

 private:
  std::size_t offset(std::initializer_list<int> idx) const;
};

std::vector<double> values_of(const JVec& u);

// (nabla_u w)^k = u^m d_m w^k + Gamma^k_mj u^m w^j, all as jets.
JVec covariant_derivative(const Gamma& gamma, const JVec& u, const JVec& w);

// g(u, v) as a jet.
Jet2 g_dot(const PointGeometry& pg, const JVec& u, const JVec& v);
double g_dot_value(const PointGeometry& pg, const std::vector<double>& u,
                   const std::vector<double>& v);

// Curvature of the given connection under the structure's sign convention:
// R(X,Y)Z = convention * ([nabla_X, nabla_Y]Z - nabla_[X,Y]Z), returned as
// R^l_ijk with R(d_i, d_j) d_k = R^l_ijk d_l.  Signature (upper, lower,
// lower, lower), index order (l, i, j, k).
TensorValue curvature_tensor(const PointGeometry& pg, const Gamma& gamma, int convention);

// R(u, v) w from the component array, on plain value vectors.
std::vector<double> curvature_apply(const TensorValue& riem, const std::vector<double>& u,
                                    const std::vector<double>& v, const std::vector<double>& w);

// g(R(u, v) w, z).
double curvature_pair(const PointGeometry& pg, const TensorValue& riem,
                      const std::vector<double>& u, const std::vector<double>& v,
                      const std::vector<double>& w, const std::vector<double>& z);

struct RicciScalar {
  Mat<double> ricci;  // coordinate components Ric(d_i, d_j)
  double scalar = 0.0;
};

// Ric(Y,Z) = sum_a g(R(e_a, Y) Z, e_a) over the orthonormal frame, and the
// scalar curvature as its g-trace.
RicciScalar ricci_and_scalar(const PointGeometry& pg, const TensorValue& riem);

// [u, v]^k = u^m d_m v^k - v^m d_m u^k as jets.  The value and gradient of
// the result are exact for expression-backed fields; for frame fields the
// value is exact.
JVec lie_bracket(const JVec& u, const JVec& v);

// (L_v g)_ij = v^m d_m g_ij + g_mj d_i v^m + g_im d_j v^m.
Mat<double> lie_derivative_metric(const PointGeometry& pg, const JVec& v);

// Hess(psi)_ij = d_i d_j psi - Gamma^k_ij d_k psi.
Mat<double> covariant_hessian(const PointGeometry& pg, const Jet2& psi, const Gamma& gamma);

double laplacian(const PointGeometry& pg, const Mat<double>& hess);

// div v = sum_a g(nabla_{e_a} v, e_a) over the orthonormal frame.
double divergence(const PointGeometry& pg, const JVec& v, const Gamma& gamma);

struct EinsteinCheck {
  bool is_einstein = false;
  double factor = 0.0;       // mean of the frame-diagonal Ricci ratios
  double diag_spread = 0.0;  // max - min of those ratios
  double offdiag_max = 0.0;
};

EinsteinCheck einstein_check(const PointGeometry& pg, const Mat<double>& ricci,
                             double tol = 1e-8);

// Einstein test for a bare symmetric matrix against the identity form; used
// for externally supplied Ricci data.
EinsteinCheck einstein_check_matrix(const Mat<double>& ricci_frame, double tol = 1e-8);

}  // namespace statsub
