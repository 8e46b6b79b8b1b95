#pragma once

#include <string>
#include <vector>

#include "statsub/geometry.hpp"

namespace statsub {

// Smooth map between charts, stored with its symbolic Jacobian so the
// differential evaluates as exact second-order jets.
struct SubmersionMap {
  Chart target_chart;
  std::vector<Expression> components;              // one per target coordinate
  std::vector<std::vector<Expression>> jacobian;   // [beta][i] = d_i component_beta
  int source_dim = 0;

  static SubmersionMap create(const Chart& source, const Chart& target,
                              std::vector<Expression> components);

  int target_dim() const { return static_cast<int>(components.size()); }
  std::vector<double> image(std::span<const double> x) const;
};

struct SubmersionSetup {
  StatisticalStructure source;
  StatisticalStructure target;
  SubmersionMap map;

  int total_dim() const { return source.dimension(); }
  int base_dim() const { return target.dimension(); }
  int fiber_dim() const { return total_dim() - base_dim(); }
  void validate() const;
};

// Orthonormal vertical/horizontal frames at a point, as jet fields.  The
// vertical frame spans null(dpsi) via Gauss-Jordan elimination whose pivot
// pattern is frozen from the value parts, so each frame vector extends to a
// smooth field near the point; the horizontal frame spans the g-orthogonal
// complement through the metric-raised Jacobian rows.
struct FrameSplit {
  int m = 0, n = 0;                // fiber and base dimensions
  int rank = 0;                    // Jacobian rank at the point
  Mat<Jet2> dpsi;                  // n x (m+n) differential jets
  std::vector<JVec> vertical;      // E_1..E_m
  std::vector<JVec> horizontal;    // X_1..X_n
  Mat<Jet2> p_v, p_h;              // projection (1,1)-tensors
};

FrameSplit build_split(const PointGeometry& pg, const SubmersionMap& map,
                       double rank_tol = 1e-9);

// Everything needed at one source point: source geometry, target geometry at
// the image point, and the frame split.
struct SubmersionGeometry {
  const SubmersionSetup* setup = nullptr;
  PointGeometry src;
  std::vector<double> y;
  PointGeometry tgt;
  FrameSplit split;
};

SubmersionGeometry submersion_geometry(const SubmersionSetup& setup,
                                       std::span<const double> x, double spd_tol = 1e-10);

JVec project_vertical(const SubmersionGeometry& sg, const JVec& u);
JVec project_horizontal(const SubmersionGeometry& sg, const JVec& u);
std::vector<double> pushforward(const SubmersionGeometry& sg, const std::vector<double>& u);

// O'Neill tensors for the given connection coefficients (pass src.gamma or
// src.gamma_star):
//   T_E F = V nabla_{VE} HF + H nabla_{VE} VF
//   A_E F = V nabla_{HE} HF + H nabla_{HE} VF
JVec oneill_T(const SubmersionGeometry& sg, const Gamma& gamma, const JVec& e, const JVec& f);
JVec oneill_A(const SubmersionGeometry& sg, const Gamma& gamma, const JVec& e, const JVec& f);

// Covariant derivatives of T and A as (1,2)-tensors:
// (nabla_U T)(E,F) = nabla_U(T_E F) - T_{nabla_U E} F - T_E(nabla_U F).
JVec nabla_T(const SubmersionGeometry& sg, const Gamma& gamma, const JVec& u, const JVec& e,
             const JVec& f);
JVec nabla_A(const SubmersionGeometry& sg, const Gamma& gamma, const JVec& u, const JVec& e,
             const JVec& f);

struct SubmersionCheck {
  int rank = 0;
  double isometry_max = 0.0;          // g(X_i,X_l) vs ghat(dpsi X_i, dpsi X_l)
  double statistical_max = 0.0;       // dpsi(nabla lifts) vs target Gamma
  double statistical_star_max = 0.0;  // same for the dual pair
  bool riemannian = false;
  bool statistical = false;
};

SubmersionCheck check_submersion(const SubmersionGeometry& sg, double tol = 1e-8);

// All O'Neill blocks on the orthonormal frames plus the derived scalars the
// identity and soliton sections consume.  Index convention: first bracket is
// the subscript argument.
struct ONeillData {
  int m = 0, n = 0;

  std::vector<std::vector<JVec>> T_vv, Ts_vv;  // [a][b] = T_{E_a} E_b (horizontal)
  std::vector<std::vector<JVec>> T_vh, Ts_vh;  // [a][i] = T_{E_a} X_i (vertical)
  std::vector<std::vector<JVec>> A_hh, As_hh;  // [i][j] = A_{X_i} X_j (vertical)
  std::vector<std::vector<JVec>> A_hv, As_hv;  // [i][a] = A_{X_i} E_a (horizontal)

  JVec N, Ns, H, Hs, sigma;  // N = sum T_{E_j}E_j, H = N/m, sigma = sum A_{X_i}X_i

  // Divergence-type scalars; hat_delta carries the codifferential sign,
  // delta-hat P = -sum_i (nabla_{X_i} P)_{X_i}, while div_* are the plain
  // positive sums so both sign readings are visible in reports.
  double hat_delta_N = 0.0, hat_delta_star_Ns = 0.0;
  double div_N = 0.0, div_star_Ns = 0.0;
  double bar_delta_sigma = 0.0, bar_delta_star_sigma = 0.0;

  // Norms and pairings.  _h uses the horizontal-slot flattening
  // sum_{i,j} over T_{E_j} X_i; _vv the vertical-pair flattening; _full both.
  double norm2_T_h = 0.0, norm2_Ts_h = 0.0;
  double norm2_T_vv = 0.0, norm2_Ts_vv = 0.0;
  double norm2_T_full = 0.0, norm2_Ts_full = 0.0;
  double norm2_A = 0.0, norm2_As = 0.0;
  double pair_T_Ts_h = 0.0, pair_T_Ts_vv = 0.0, pair_T_Ts_full = 0.0;
  double pair_A_As = 0.0;
  double pair_N_Ns = 0.0, pair_sigma_sigma = 0.0;

  // Structural identity residuals.
  double e3_max = 0.0;       // T_V W = T_W V (and starred)
  double e4_max = 0.0;       // A_X Y = -A_Y X = 1/2 V[X,Y]
  double ss3_max = 0.0;      // skew-adjointness pairings
  double lemma_a_max = 0.0;  // A_X Y = -A*_Y X
};

ONeillData oneill_tensors(const SubmersionGeometry& sg);

// Fiber curvature data in the vertical frame.
struct FiberGeometry {
  int m = 0;
  // rie4(a,b,c,e) = g(Rbar(E_a,E_b)E_c, E_e); _star for the dual connection.
  std::vector<double> rie, rie_star;
  // Ambient coordinate components of Rbar(E_a,E_b)E_c, for report tables.
  std::vector<std::vector<double>> rie_vec, rie_vec_star;
  Mat<double> ric, ric_star;  // frame components
  double scalar = 0.0, scalar_star = 0.0;
  double duality_max = 0.0;  // g(Rbar(E,F)G,K) + g(G, Rbar*(E,F)K)

  double rie4(int a, int b, int c, int e) const {
    return rie[((a * m + b) * m + c) * m + e];
  }
  double rie4_star(int a, int b, int c, int e) const {
    return rie_star[((a * m + b) * m + c) * m + e];
  }
};

FiberGeometry fiber_geometry(const SubmersionGeometry& sg);

// Base curvature contracted against pushforwards of the horizontal frame.
struct BaseGeometry {
  Mat<double> ric;        // [i][l] = Ric-hat(dpsi X_i, dpsi X_l)
  Mat<double> ric_star;
  double scalar = 0.0, scalar_star = 0.0;
  TensorValue riem, riem_star;  // target coordinate components
};

BaseGeometry base_geometry(const SubmersionGeometry& sg);

// Gauss-type curvature identities over frame 4-tuples, both sides evaluated
// independently.
struct CurvatureIdentityCheck {
  double vertical_max = 0.0;    // total vs fiber + T-terms
  double horizontal_max = 0.0;  // total vs base + A-terms
};

CurvatureIdentityCheck curvature_identity_check(const SubmersionGeometry& sg,
                                                const ONeillData& od, const FiberGeometry& fg,
                                                const BaseGeometry& bg);

// One named-term row of an identity table.
struct TermRow {
  std::string name;
  double value = 0.0;
};

struct RicciIdentityCheck {
  double vertical_max = 0.0;    // Ricci relation on vertical pairs
  double horizontal_max = 0.0;  // Ricci relation on horizontal pairs
  // Term breakdown for the diagonal pairs (E_a,E_a) and (X_i,X_i).
  std::vector<std::vector<TermRow>> vertical_terms, horizontal_terms;
};

RicciIdentityCheck ricci_identity_check(const SubmersionGeometry& sg, const ONeillData& od,
                                        const FiberGeometry& fg, const BaseGeometry& bg);

struct ScalarDecomposition {
  double total_scalar = 0.0, fiber_scalar = 0.0, base_scalar = 0.0;
  double lhs = 0.0;  // total - fiber - base
  std::vector<TermRow> terms;
  double rhs_sum = 0.0;
  double residual = 0.0;
};

ScalarDecomposition scalar_decomposition(const SubmersionGeometry& sg, const ONeillData& od,
                                         const FiberGeometry& fg, const BaseGeometry& bg);

struct ParallelDistributionCheck {
  // Max norms of the obstruction blocks for each connection.
  double v_obstruction = 0.0, v_obstruction_star = 0.0;  // T_vv outputs, A_hv outputs
  double h_obstruction = 0.0, h_obstruction_star = 0.0;  // T_vh outputs, A_hh outputs
  bool vertical_parallel = false, vertical_parallel_star = false;
  bool horizontal_parallel = false, horizontal_parallel_star = false;
};

ParallelDistributionCheck parallel_distribution_check(const ONeillData& od,
                                                      const SubmersionGeometry& sg,
                                                      double tol = 1e-8);

}  // namespace statsub
