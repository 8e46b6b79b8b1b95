#include "statsub/solitons.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "statsub/errors.hpp"

namespace statsub {

namespace {

double contract2(const Mat<double>& a, const std::vector<double>& u,
                 const std::vector<double>& v) {
  double acc = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) acc += a(i, j) * u[i] * v[j];
  return acc;
}

double trace_g(const PointGeometry& pg, const Mat<double>& a) {
  double acc = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) acc += pg.ginv(i, j).value() * a(i, j);
  return acc;
}

double gval(const PointGeometry& pg, const JVec& u, const JVec& v) {
  return g_dot(pg, u, v).value();
}

double gnorm(const PointGeometry& pg, const JVec& u) {
  return std::sqrt(std::max(0.0, gval(pg, u, u)));
}

void spread_stats(const std::vector<double>& dir, double& mean, double& spread) {
  mean = 0.0;
  double lo = dir[0], hi = dir[0];
  for (double v : dir) {
    mean += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  mean /= static_cast<double>(dir.size());
  spread = hi - lo;
}

double mode_value(const std::vector<double>& dir, double tol) {
  std::size_t best = 0, best_count = 0;
  for (std::size_t i = 0; i < dir.size(); ++i) {
    std::size_t count = 0;
    for (double v : dir)
      if (std::abs(v - dir[i]) <= tol) ++count;
    if (count > best_count) {
      best_count = count;
      best = i;
    }
  }
  return dir[best];
}

}  // namespace

PotentialData eval_potential(const PointGeometry& pg, const Potential& pot) {
  PotentialData pd;
  const int d = pg.dim();
  if (pot.kind == PotentialKind::Gradient) {
    pd.psi = pot.scalar.eval_jet(pg.x);
    pd.has_scalar = true;
    pd.v = JVec(d, Jet2::constant(0.0, d));
    for (int k = 0; k < d; ++k) {
      Jet2 acc = Jet2::constant(0.0, d);
      for (int l = 0; l < d; ++l) acc += pg.ginv(k, l) * Jet2::partial(pd.psi, l);
      pd.v[k] = acc;
    }
  } else {
    if (static_cast<int>(pot.components.size()) != d)
      throw ValidationError("potential vector field needs one component per coordinate");
    pd.v = JVec(d, Jet2::constant(0.0, d));
    for (int k = 0; k < d; ++k) pd.v[k] = pot.components[k].eval_jet(pg.x);
  }
  return pd;
}

std::string classify_lambda(double lambda, double band) {
  if (lambda > band) return "expanding";
  if (lambda < -band) return "shrinking";
  return "steady";
}

std::vector<std::string> special_rho_labels(double rho, int dim, double tol) {
  std::vector<std::string> out;
  if (std::abs(rho - 0.5) <= tol) out.push_back("Einstein coupling (rho = 1/2)");
  if (dim > 0 && std::abs(rho - 1.0 / dim) <= tol)
    out.push_back("traceless Ricci coupling (rho = 1/n)");
  if (dim > 1 && std::abs(rho - 1.0 / (2.0 * (dim - 1))) <= tol)
    out.push_back("Schouten coupling (rho = 1/(2(n-1)))");
  if (std::abs(rho - 1.0 / (2.0 * dim - 1.0)) <= tol)
    out.push_back("Schouten coupling, alternate printed value (rho = 1/(2n-1))");
  if (std::abs(rho) <= tol) out.push_back("Ricci soliton coupling (rho = 0)");
  return out;
}

namespace {

SolitonPointReport solve_report(const Mat<double>& half_sym, const Mat<double>& ricci,
                                double scalar, const std::vector<std::vector<double>>& frame,
                                double rho, std::optional<double> lambda_fixed, double spread_tol,
                                double band, bool lambda_from_mode, int dim_for_rho) {
  SolitonPointReport rep;
  rep.half_sym = half_sym;
  rep.ricci = ricci;
  rep.scalar = scalar;
  for (const auto& u : frame)
    rep.lambda_dir.push_back(rho * scalar - (contract2(half_sym, u, u) + contract2(ricci, u, u)));
  spread_stats(rep.lambda_dir, rep.lambda_mean, rep.lambda_spread);
  rep.lambda_consistent = rep.lambda_spread <= spread_tol;
  if (lambda_fixed) {
    rep.lambda = *lambda_fixed;
    rep.lambda_solved = false;
  } else {
    rep.lambda = lambda_from_mode ? mode_value(rep.lambda_dir, 1e-9) : rep.lambda_mean;
    rep.lambda_solved = true;
  }
  rep.classification = classify_lambda(rep.lambda, band);
  rep.special_rho = special_rho_labels(rho, dim_for_rho);
  return rep;
}

}  // namespace

SolitonPointReport soliton_point(const PointGeometry& pg, const Potential& pot, double rho,
                                 std::optional<double> lambda_fixed, double spread_tol,
                                 double band) {
  const int d = pg.dim();
  const PotentialData pd = eval_potential(pg, pot);

  Mat<double> half_sym(d, d, 0.0);
  if (pot.kind == PotentialKind::Gradient) {
    half_sym = covariant_hessian(pg, pd.psi, pg.gamma);
  } else {
    const Mat<double> lie = lie_derivative_metric(pg, pd.v);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) half_sym(i, j) = 0.5 * lie(i, j);
  }

  const TensorValue riem = curvature_tensor(pg, pg.gamma, pg.structure->convention);
  const RicciScalar rs = ricci_and_scalar(pg, riem);

  std::vector<std::vector<double>> frame;
  for (const auto& e : pg.frame) frame.push_back(values_of(e));
  SolitonPointReport rep = solve_report(half_sym, rs.ricci, rs.scalar, frame, rho, lambda_fixed,
                                        spread_tol, band, false, d);

  double res = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      res = std::max(res, std::abs(half_sym(i, j) + rs.ricci(i, j) +
                                   (rep.lambda - rho * rs.scalar) * pg.g(i, j).value()));
  rep.residual_max = res;

  // Trace bookkeeping: the g-trace of the flow tensor must equal the
  // independently computed divergence/Laplacian of the potential plus
  // R + d (lambda - rho R).
  Mat<double> full(d, d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      full(i, j) = half_sym(i, j) + rs.ricci(i, j) +
                   (rep.lambda - rho * rs.scalar) * pg.g(i, j).value();
  double trace_half;
  if (pot.kind == PotentialKind::Gradient) {
    trace_half = laplacian(pg, half_sym);
  } else {
    const Gamma lc = ConnectionField::levi_civita().coefficients(pg.structure->metric, pg.g,
                                                                 pg.ginv, pg.x);
    trace_half = divergence(pg, pd.v, lc);
  }
  rep.trace_residual =
      std::abs(trace_g(pg, full) - (trace_half + rs.scalar + d * (rep.lambda - rho * rs.scalar)));
  return rep;
}

SolitonPointReport soliton_from_claims(const Mat<double>& ricci_frame, double scalar, double rho,
                                       std::optional<double> lambda_fixed, double spread_tol,
                                       double band) {
  const int d = ricci_frame.rows();
  const Mat<double> zero(d, d, 0.0);
  std::vector<std::vector<double>> frame(d, std::vector<double>(d, 0.0));
  for (int i = 0; i < d; ++i) frame[i][i] = 1.0;
  SolitonPointReport rep = solve_report(zero, ricci_frame, scalar, frame, rho, lambda_fixed,
                                        spread_tol, band, true, d);
  double res = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      res = std::max(res, std::abs(ricci_frame(i, j) +
                                   (rep.lambda - rho * scalar) * (i == j ? 1.0 : 0.0)));
  rep.residual_max = res;
  return rep;
}

double lambda_fiber_correction(const ONeillData& od, double rho, double lambda) {
  return lambda +
         rho * (od.pair_A_As + od.pair_N_Ns + od.hat_delta_N + od.hat_delta_star_Ns);
}

double lambda_base_correction(const ONeillData& od, double rho, double lambda) {
  return lambda +
         rho * (2.0 * od.norm2_A + od.pair_T_Ts_h + od.hat_delta_N + od.hat_delta_star_Ns);
}

FiberSolitonReport fiber_soliton(const SubmersionGeometry& sg, const ONeillData& od,
                                 const FiberGeometry& fg, const PotentialData& pd, double rho,
                                 double lambda, bool vertical_parallel, double vertical_tol,
                                 double spread_tol, double band) {
  FiberSolitonReport rep;
  rep.vertical_parallel = vertical_parallel;
  rep.horizontal_norm = gnorm(sg.src, project_horizontal(sg, pd.v));
  if (rep.horizontal_norm > vertical_tol) {
    const std::string msg = "potential has a horizontal part of size " +
                            std::to_string(rep.horizontal_norm) +
                            "; the fiber restriction needs a vertical field";
    if (pd.has_scalar) throw NotVerticalGradient(msg);
    throw NotVertical(msg);
  }
  rep.capital_lambda = lambda_fiber_correction(od, rho, lambda);

  const int m = sg.split.m;
  const auto& E = sg.split.vertical;
  Mat<double> half(m, m, 0.0), half_star(m, m, 0.0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      half(a, b) = 0.5 * (gval(sg.src, project_vertical(sg, covariant_derivative(
                                           sg.src.gamma, E[a], pd.v)),
                               E[b]) +
                          gval(sg.src, project_vertical(sg, covariant_derivative(
                                           sg.src.gamma, E[b], pd.v)),
                               E[a]));
      half_star(a, b) = 0.5 * (gval(sg.src, project_vertical(sg, covariant_derivative(
                                                sg.src.gamma_star, E[a], pd.v)),
                                    E[b]) +
                               gval(sg.src, project_vertical(sg, covariant_derivative(
                                                sg.src.gamma_star, E[b], pd.v)),
                                    E[a]));
    }

  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const double del = (a == b) ? 1.0 : 0.0;
      rep.residual_max = std::max(
          rep.residual_max, std::abs(half(a, b) + fg.ric(a, b) +
                                     (rep.capital_lambda - rho * fg.scalar) * del));
      rep.residual_star_max = std::max(
          rep.residual_star_max, std::abs(half_star(a, b) + fg.ric_star(a, b) +
                                          (rep.capital_lambda - rho * fg.scalar_star) * del));
    }

  for (int a = 0; a < m; ++a)
    rep.lambda_dir.push_back(rho * fg.scalar - (half(a, a) + fg.ric(a, a)));
  spread_stats(rep.lambda_dir, rep.lambda_mean, rep.lambda_spread);
  rep.lambda_consistent = rep.lambda_spread <= spread_tol;
  rep.classification = classify_lambda(rep.capital_lambda, band);
  return rep;
}

BaseSolitonReport base_soliton(const SubmersionGeometry& sg, const ONeillData& od,
                               const BaseGeometry& bg, const PotentialData& pd, double rho,
                               double lambda, bool horizontal_parallel, double tol) {
  BaseSolitonReport rep;
  rep.horizontal_parallel = horizontal_parallel;
  rep.vertical_norm = gnorm(sg.src, project_vertical(sg, pd.v));
  rep.horizontal_norm = gnorm(sg.src, project_horizontal(sg, pd.v));
  rep.potential_vertical = rep.horizontal_norm <= tol;
  rep.potential_horizontal = rep.vertical_norm <= tol;
  rep.capital_lambda = lambda_base_correction(od, rho, lambda);

  const int n = sg.split.n;
  const auto& X = sg.split.horizontal;
  Mat<double> lie_hh(n, n, 0.0);
  if (pd.has_scalar) {
    const Mat<double> hess = covariant_hessian(sg.src, pd.psi, sg.src.gamma);
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l)
        lie_hh(i, l) = 2.0 * contract2(hess, values_of(X[i]), values_of(X[l]));
  } else {
    const Mat<double> lie = lie_derivative_metric(sg.src, pd.v);
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l)
        lie_hh(i, l) = contract2(lie, values_of(X[i]), values_of(X[l]));
  }

  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      const double del = (i == l) ? 1.0 : 0.0;
      rep.residual_printed_max =
          std::max(rep.residual_printed_max,
                   std::abs(lie_hh(i, l) + 2.0 * bg.ric(i, l) +
                            (2.0 * rep.capital_lambda - rho * bg.scalar) * del));
      rep.residual_consistent_max =
          std::max(rep.residual_consistent_max,
                   std::abs(lie_hh(i, l) + 2.0 * bg.ric(i, l) +
                            2.0 * (rep.capital_lambda - rho * bg.scalar) * del));
    }

  const RicciScalar rs = ricci_and_scalar(sg.tgt, bg.riem);
  rep.target_einstein = einstein_check(sg.tgt, rs.ricci, tol);
  return rep;
}

ConformalReport conformal_diagnostic(const PointGeometry& pg, const JVec& v, double tol) {
  ConformalReport rep;
  const int d = pg.dim();
  const Mat<double> lie = lie_derivative_metric(pg, v);
  rep.phi = trace_g(pg, lie) / (2.0 * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      rep.residual_max =
          std::max(rep.residual_max, std::abs(lie(i, j) - 2.0 * rep.phi * pg.g(i, j).value()));
  rep.conformal = rep.residual_max <= tol;
  return rep;
}

double einstein_fiber_scalar(int m, double rho, double phi, double capital_lambda) {
  const double denom = 1.0 - m * rho / 2.0;
  if (std::abs(denom) <= 1e-12)
    throw SingularDenominator("1 - m rho / 2 vanishes for m = " + std::to_string(m) +
                              ", rho = " + std::to_string(rho));
  return -m * (phi + capital_lambda) / denom;
}

std::string threshold_classify(double rbar, double rho, int m, double phi, double band) {
  const double t = rbar * (rho / 2.0 - 1.0 / m) - phi;
  if (t > band) return "expanding";
  if (t < -band) return "shrinking";
  return "steady";
}

PoissonReport poisson_analysis(const SubmersionGeometry& sg, const ONeillData& od,
                               const FiberGeometry& fg, const PotentialData& pd, double rho,
                               double lambda, double tol, double band) {
  if (!pd.has_scalar)
    throw ValidationError("the Poisson analysis needs a gradient potential");
  const double horizontal_norm = gnorm(sg.src, project_horizontal(sg, pd.v));
  if (horizontal_norm > tol)
    throw NotVerticalGradient("gradient has a horizontal part of size " +
                              std::to_string(horizontal_norm) +
                              "; the fiber restriction needs a vertical gradient");

  PoissonReport rep;
  const int m = sg.split.m;
  const auto& E = sg.split.vertical;
  for (int a = 0; a < m; ++a)
    rep.laplacian_fiber +=
        gval(sg.src, project_vertical(sg, covariant_derivative(sg.src.gamma, E[a], pd.v)), E[a]);
  rep.laplacian_ambient =
      laplacian(sg.src, covariant_hessian(sg.src, pd.psi, sg.src.gamma));
  rep.capital_lambda = lambda_fiber_correction(od, rho, lambda);
  const double tail = fg.scalar * (1.0 - m * rho / 2.0);
  rep.rhs_printed = m * rep.capital_lambda - tail;
  rep.rhs_contracted = -m * rep.capital_lambda - tail;
  rep.residual_printed = std::abs(rep.laplacian_fiber - rep.rhs_printed);
  rep.residual_contracted = std::abs(rep.laplacian_fiber - rep.rhs_contracted);
  rep.harmonic = std::abs(rep.laplacian_ambient) <= tol;
  if (rep.harmonic) rep.harmonic_classification = harmonic_classify(rho, m, band);
  return rep;
}

std::string harmonic_classify(double rho, int m, double band) {
  const double t = rho / 2.0 - 1.0 / m;
  if (t > band) return "expanding";
  if (t < -band) return "shrinking";
  return "steady";
}

}  // namespace statsub
