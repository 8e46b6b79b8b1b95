#pragma once

#include <string>
#include <vector>

#include "statsub/submersion.hpp"

namespace statsub {

// One curvature bound evaluated at a point.  `slack` is oriented so that a
// satisfied bound gives slack >= 0 regardless of the inequality's direction.
struct InequalityReport {
  std::string name;
  std::string direction;  // frame direction label; empty for scalar bounds
  double lhs = 0.0, rhs = 0.0, slack = 0.0;
  bool satisfied = false;
  bool equality = false;
  bool applicable = true;  // false when a hypothesis gate fails
  std::string note;
  std::vector<TermRow> terms;
};

struct EqualityDiagnostics {
  double norm_T = 0.0, norm_Ts = 0.0;  // horizontal-slot flattening
  double cosine_h = 0.0;               // alignment of T and T*, same flattening
  double cosine_full = 0.0;            // alignment over all frame slots
  double norm_A = 0.0;
  double max_v_bracket = 0.0;  // largest vertical part of [X_i, X_j]
};

struct InequalitySuite {
  std::vector<InequalityReport> reports;
  EqualityDiagnostics diag;
  // Internal Cauchy-Schwarz consistency: max(0, |g(T,T*)| - |T||T*|) must be
  // numerically zero.
  double cs_residual = 0.0;
};

InequalitySuite evaluate_inequalities(const SubmersionGeometry& sg, const ONeillData& od,
                                      const FiberGeometry& fg, const BaseGeometry& bg,
                                      double tol = 1e-8);

}  // namespace statsub
