#include "statsub/submersion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "statsub/errors.hpp"
#include "statsub/geometry.hpp"

namespace statsub {

namespace {

JVec vsum(const JVec& a, const JVec& b) {
  JVec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

JVec vdiff(const JVec& a, const JVec& b) {
  JVec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

JVec vscale(const JVec& a, double s) {
  JVec r = a;
  for (auto& e : r) e = e * s;
  return r;
}

double gval(const PointGeometry& pg, const JVec& u, const JVec& v) {
  return g_dot(pg, u, v).value();
}

double gnorm(const PointGeometry& pg, const JVec& u) {
  return std::sqrt(std::max(0.0, gval(pg, u, u)));
}

}  // namespace

SubmersionMap SubmersionMap::create(const Chart& source, const Chart& target,
                                    std::vector<Expression> components) {
  source.validate();
  target.validate();
  if (static_cast<int>(components.size()) != target.dimension())
    throw ValidationError("map needs one component per target coordinate");
  SubmersionMap map;
  map.target_chart = target;
  map.components = std::move(components);
  map.source_dim = source.dimension();
  map.jacobian.resize(map.components.size());
  for (std::size_t b = 0; b < map.components.size(); ++b) {
    map.jacobian[b].reserve(map.source_dim);
    for (int i = 0; i < map.source_dim; ++i)
      map.jacobian[b].push_back(map.components[b].derivative(i));
  }
  return map;
}

std::vector<double> SubmersionMap::image(std::span<const double> x) const {
  std::vector<double> y(components.size());
  for (std::size_t b = 0; b < components.size(); ++b) y[b] = components[b].eval(x);
  return y;
}

void SubmersionSetup::validate() const {
  source.chart.validate();
  target.chart.validate();
  if (map.source_dim != source.dimension())
    throw ValidationError("map was built over a different source chart");
  if (map.target_dim() != target.dimension())
    throw ValidationError("map has " + std::to_string(map.target_dim()) +
                          " components but the target has dimension " +
                          std::to_string(target.dimension()));
  if (target.dimension() < 1) throw ValidationError("target must have dimension at least 1");
  if (fiber_dim() < 1)
    throw ValidationError("source dimension must exceed target dimension for a submersion");
}

FrameSplit build_split(const PointGeometry& pg, const SubmersionMap& map, double rank_tol) {
  const int p = pg.dim();
  const int q = map.target_dim();
  FrameSplit split;
  split.n = q;
  split.m = p - q;

  split.dpsi = Mat<Jet2>(q, p, Jet2::constant(0.0, p));
  for (int b = 0; b < q; ++b)
    for (int i = 0; i < p; ++i) split.dpsi(b, i) = map.jacobian[b][i].eval_jet(pg.x);

  // Gauss-Jordan elimination of the differential in jet arithmetic with the
  // pivot pattern frozen from the value parts; the resulting null-space basis
  // is then a smooth frame of the kernel near the point.
  Mat<Jet2> red = split.dpsi;
  std::vector<int> pivot_col(q, -1);
  std::vector<bool> used(p, false);
  int rank = 0;
  for (int r = 0; r < q; ++r) {
    int best = -1;
    double best_abs = rank_tol;
    for (int c = 0; c < p; ++c) {
      if (used[c]) continue;
      const double a = std::abs(red(r, c).value());
      if (a > best_abs) {
        best_abs = a;
        best = c;
      }
    }
    if (best < 0) continue;
    used[best] = true;
    pivot_col[r] = best;
    ++rank;
    const Jet2 inv = 1.0 / red(r, best);
    for (int c = 0; c < p; ++c) red(r, c) = red(r, c) * inv;
    for (int r2 = 0; r2 < q; ++r2) {
      if (r2 == r) continue;
      const Jet2 f = red(r2, best);
      for (int c = 0; c < p; ++c) red(r2, c) -= f * red(r, c);
    }
  }
  split.rank = rank;
  if (rank < q)
    throw RankDeficient("map differential has rank " + std::to_string(rank) +
                        " but the target dimension is " + std::to_string(q));

  std::vector<JVec> raw_vertical;
  raw_vertical.reserve(split.m);
  for (int c = 0; c < p; ++c) {
    if (used[c]) continue;
    JVec v(p, Jet2::constant(0.0, p));
    v[c] = Jet2::constant(1.0, p);
    for (int r = 0; r < q; ++r)
      if (pivot_col[r] >= 0) v[pivot_col[r]] = -red(r, c);
    raw_vertical.push_back(std::move(v));
  }
  split.vertical = gram_schmidt(pg.g, std::move(raw_vertical));

  std::vector<JVec> raw_horizontal;
  raw_horizontal.reserve(q);
  for (int b = 0; b < q; ++b) {
    JVec h(p, Jet2::constant(0.0, p));
    for (int k = 0; k < p; ++k) {
      Jet2 acc = Jet2::constant(0.0, p);
      for (int l = 0; l < p; ++l) acc += pg.ginv(k, l) * split.dpsi(b, l);
      h[k] = acc;
    }
    raw_horizontal.push_back(std::move(h));
  }
  split.horizontal = gram_schmidt(pg.g, std::move(raw_horizontal));

  split.p_v = Mat<Jet2>(p, p, Jet2::constant(0.0, p));
  for (const JVec& e : split.vertical) {
    const JVec ge = mat_vec(pg.g, e);
    for (int k = 0; k < p; ++k)
      for (int l = 0; l < p; ++l) split.p_v(k, l) += e[k] * ge[l];
  }
  split.p_h = Mat<Jet2>(p, p, Jet2::constant(0.0, p));
  for (int k = 0; k < p; ++k)
    for (int l = 0; l < p; ++l)
      split.p_h(k, l) = Jet2::constant(k == l ? 1.0 : 0.0, p) - split.p_v(k, l);
  return split;
}

SubmersionGeometry submersion_geometry(const SubmersionSetup& setup, std::span<const double> x,
                                       double spd_tol) {
  setup.validate();
  SubmersionGeometry sg;
  sg.setup = &setup;
  sg.src = point_geometry(setup.source, x, spd_tol);
  sg.y = setup.map.image(x);
  sg.tgt = point_geometry(setup.target, sg.y, spd_tol);
  sg.split = build_split(sg.src, setup.map);
  return sg;
}

JVec project_vertical(const SubmersionGeometry& sg, const JVec& u) {
  return mat_vec(sg.split.p_v, u);
}

JVec project_horizontal(const SubmersionGeometry& sg, const JVec& u) {
  return mat_vec(sg.split.p_h, u);
}

std::vector<double> pushforward(const SubmersionGeometry& sg, const std::vector<double>& u) {
  std::vector<double> r(sg.split.n, 0.0);
  for (int b = 0; b < sg.split.n; ++b)
    for (int i = 0; i < sg.split.dpsi.cols(); ++i) r[b] += sg.split.dpsi(b, i).value() * u[i];
  return r;
}

JVec oneill_T(const SubmersionGeometry& sg, const Gamma& gamma, const JVec& e, const JVec& f) {
  const JVec ve = project_vertical(sg, e);
  const JVec vf = project_vertical(sg, f);
  const JVec hf = project_horizontal(sg, f);
  return vsum(project_vertical(sg, covariant_derivative(gamma, ve, hf)),
              project_horizontal(sg, covariant_derivative(gamma, ve, vf)));
}

JVec oneill_A(const SubmersionGeometry& sg, const Gamma& gamma, const JVec& e, const JVec& f) {
  const JVec he = project_horizontal(sg, e);
  const JVec vf = project_vertical(sg, f);
  const JVec hf = project_horizontal(sg, f);
  return vsum(project_vertical(sg, covariant_derivative(gamma, he, hf)),
              project_horizontal(sg, covariant_derivative(gamma, he, vf)));
}

JVec nabla_T(const SubmersionGeometry& sg, const Gamma& gamma, const JVec& u, const JVec& e,
             const JVec& f) {
  const JVec tef = oneill_T(sg, gamma, e, f);
  JVec r = covariant_derivative(gamma, u, tef);
  r = vdiff(r, oneill_T(sg, gamma, covariant_derivative(gamma, u, e), f));
  r = vdiff(r, oneill_T(sg, gamma, e, covariant_derivative(gamma, u, f)));
  return r;
}

JVec nabla_A(const SubmersionGeometry& sg, const Gamma& gamma, const JVec& u, const JVec& e,
             const JVec& f) {
  const JVec aef = oneill_A(sg, gamma, e, f);
  JVec r = covariant_derivative(gamma, u, aef);
  r = vdiff(r, oneill_A(sg, gamma, covariant_derivative(gamma, u, e), f));
  r = vdiff(r, oneill_A(sg, gamma, e, covariant_derivative(gamma, u, f)));
  return r;
}

SubmersionCheck check_submersion(const SubmersionGeometry& sg, double tol) {
  SubmersionCheck out;
  const int q = sg.split.n;
  const int p = sg.src.dim();
  out.rank = sg.split.rank;

  std::vector<std::vector<double>> xhat(q);
  for (int i = 0; i < q; ++i) xhat[i] = pushforward(sg, values_of(sg.split.horizontal[i]));
  for (int i = 0; i < q; ++i)
    for (int l = 0; l < q; ++l) {
      const double a = gval(sg.src, sg.split.horizontal[i], sg.split.horizontal[l]);
      const double b = g_dot_value(sg.tgt, xhat[i], xhat[l]);
      out.isometry_max = std::max(out.isometry_max, std::abs(a - b));
    }

  // Basic lifts: horizontal jet fields psi-related to the target coordinate
  // frame, L_beta with dpsi L_beta = d/dy_beta.
  Mat<Jet2> B(q, q, Jet2::constant(0.0, p));
  for (int b = 0; b < q; ++b)
    for (int a = 0; a < q; ++a) {
      Jet2 acc = Jet2::constant(0.0, p);
      for (int i = 0; i < p; ++i) acc += sg.split.dpsi(b, i) * sg.split.horizontal[a][i];
      B(b, a) = acc;
    }
  std::vector<JVec> lift(q);
  for (int beta = 0; beta < q; ++beta) {
    Vec<Jet2> rhs(q, Jet2::constant(0.0, p));
    rhs[beta] = Jet2::constant(1.0, p);
    const Vec<Jet2> c = solve(B, rhs);
    JVec L(p, Jet2::constant(0.0, p));
    for (int a = 0; a < q; ++a)
      for (int i = 0; i < p; ++i) L[i] += c[a] * sg.split.horizontal[a][i];
    lift[beta] = std::move(L);
  }

  for (int alpha = 0; alpha < q; ++alpha)
    for (int beta = 0; beta < q; ++beta) {
      const std::vector<double> push =
          pushforward(sg, values_of(covariant_derivative(sg.src.gamma, lift[alpha], lift[beta])));
      const std::vector<double> push_star = pushforward(
          sg, values_of(covariant_derivative(sg.src.gamma_star, lift[alpha], lift[beta])));
      for (int gc = 0; gc < q; ++gc) {
        out.statistical_max =
            std::max(out.statistical_max, std::abs(push[gc] - sg.tgt.gamma(gc, alpha, beta).value()));
        out.statistical_star_max =
            std::max(out.statistical_star_max,
                     std::abs(push_star[gc] - sg.tgt.gamma_star(gc, alpha, beta).value()));
      }
    }

  out.riemannian = out.isometry_max <= tol;
  out.statistical =
      out.riemannian && out.statistical_max <= tol && out.statistical_star_max <= tol;
  return out;
}

ONeillData oneill_tensors(const SubmersionGeometry& sg) {
  ONeillData od;
  const int m = sg.split.m;
  const int n = sg.split.n;
  od.m = m;
  od.n = n;
  const auto& E = sg.split.vertical;
  const auto& X = sg.split.horizontal;
  const Gamma& ga = sg.src.gamma;
  const Gamma& gs = sg.src.gamma_star;
  const int p = sg.src.dim();

  auto block = [&](auto&& f, const std::vector<JVec>& sub, const std::vector<JVec>& arg) {
    std::vector<std::vector<JVec>> out(sub.size(), std::vector<JVec>(arg.size()));
    for (std::size_t a = 0; a < sub.size(); ++a)
      for (std::size_t b = 0; b < arg.size(); ++b) out[a][b] = f(sub[a], arg[b]);
    return out;
  };
  auto t = [&](const JVec& e, const JVec& f) { return oneill_T(sg, ga, e, f); };
  auto ts = [&](const JVec& e, const JVec& f) { return oneill_T(sg, gs, e, f); };
  auto av = [&](const JVec& e, const JVec& f) { return oneill_A(sg, ga, e, f); };
  auto as = [&](const JVec& e, const JVec& f) { return oneill_A(sg, gs, e, f); };

  od.T_vv = block(t, E, E);
  od.Ts_vv = block(ts, E, E);
  od.T_vh = block(t, E, X);
  od.Ts_vh = block(ts, E, X);
  od.A_hh = block(av, X, X);
  od.As_hh = block(as, X, X);
  od.A_hv = block(av, X, E);
  od.As_hv = block(as, X, E);

  od.N = JVec(p, Jet2::constant(0.0, p));
  od.Ns = od.N;
  od.sigma = od.N;
  for (int a = 0; a < m; ++a) {
    od.N = vsum(od.N, od.T_vv[a][a]);
    od.Ns = vsum(od.Ns, od.Ts_vv[a][a]);
  }
  od.H = vscale(od.N, 1.0 / m);
  od.Hs = vscale(od.Ns, 1.0 / m);
  for (int i = 0; i < n; ++i) od.sigma = vsum(od.sigma, od.A_hh[i][i]);

  for (int i = 0; i < n; ++i) {
    od.hat_delta_N -= gval(sg.src, covariant_derivative(ga, X[i], od.N), X[i]);
    od.hat_delta_star_Ns -= gval(sg.src, covariant_derivative(gs, X[i], od.Ns), X[i]);
  }
  od.div_N = -od.hat_delta_N;
  od.div_star_Ns = -od.hat_delta_star_Ns;
  for (int a = 0; a < m; ++a) {
    od.bar_delta_sigma -= gval(sg.src, covariant_derivative(ga, E[a], od.sigma), E[a]);
    od.bar_delta_star_sigma -= gval(sg.src, covariant_derivative(gs, E[a], od.sigma), E[a]);
  }

  for (int a = 0; a < m; ++a)
    for (int i = 0; i < n; ++i) {
      od.norm2_T_h += gval(sg.src, od.T_vh[a][i], od.T_vh[a][i]);
      od.norm2_Ts_h += gval(sg.src, od.Ts_vh[a][i], od.Ts_vh[a][i]);
      od.pair_T_Ts_h += gval(sg.src, od.T_vh[a][i], od.Ts_vh[a][i]);
    }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      od.norm2_T_vv += gval(sg.src, od.T_vv[a][b], od.T_vv[a][b]);
      od.norm2_Ts_vv += gval(sg.src, od.Ts_vv[a][b], od.Ts_vv[a][b]);
      od.pair_T_Ts_vv += gval(sg.src, od.T_vv[a][b], od.Ts_vv[a][b]);
    }
  od.norm2_T_full = od.norm2_T_h + od.norm2_T_vv;
  od.norm2_Ts_full = od.norm2_Ts_h + od.norm2_Ts_vv;
  od.pair_T_Ts_full = od.pair_T_Ts_h + od.pair_T_Ts_vv;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      od.norm2_A += gval(sg.src, od.A_hh[i][j], od.A_hh[i][j]);
      od.norm2_As += gval(sg.src, od.As_hh[i][j], od.As_hh[i][j]);
      od.pair_A_As += gval(sg.src, od.A_hh[i][j], od.As_hh[i][j]);
    }
  od.pair_N_Ns = gval(sg.src, od.N, od.Ns);
  od.pair_sigma_sigma = gval(sg.src, od.sigma, od.sigma);

  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      od.e3_max = std::max(od.e3_max, gnorm(sg.src, vdiff(od.T_vv[a][b], od.T_vv[b][a])));
      od.e3_max = std::max(od.e3_max, gnorm(sg.src, vdiff(od.Ts_vv[a][b], od.Ts_vv[b][a])));
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const JVec vb = project_vertical(sg, lie_bracket(X[i], X[j]));
      od.e4_max =
          std::max(od.e4_max, gnorm(sg.src, vdiff(od.A_hh[i][j], vscale(vb, 0.5))));
      od.lemma_a_max =
          std::max(od.lemma_a_max, gnorm(sg.src, vsum(od.A_hh[i][j], od.As_hh[j][i])));
    }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int i = 0; i < n; ++i) {
        od.ss3_max = std::max(od.ss3_max, std::abs(gval(sg.src, od.T_vv[a][b], X[i]) +
                                                   gval(sg.src, E[b], od.Ts_vh[a][i])));
        od.ss3_max = std::max(od.ss3_max, std::abs(gval(sg.src, od.Ts_vv[a][b], X[i]) +
                                                   gval(sg.src, E[b], od.T_vh[a][i])));
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < m; ++a) {
        od.ss3_max = std::max(od.ss3_max, std::abs(gval(sg.src, od.A_hh[i][j], E[a]) +
                                                   gval(sg.src, X[j], od.As_hv[i][a])));
        od.ss3_max = std::max(od.ss3_max, std::abs(gval(sg.src, od.As_hh[i][j], E[a]) +
                                                   gval(sg.src, X[j], od.A_hv[i][a])));
      }
  return od;
}

namespace {

// Curvature of the induced fiber connection P_V nabla over the vertical frame.
void fiber_side(const SubmersionGeometry& sg, const Gamma& gamma, std::vector<double>& rie,
                std::vector<std::vector<double>>& rie_vec, Mat<double>& ric, double& scalar) {
  const int m = sg.split.m;
  const auto& E = sg.split.vertical;
  const int eps = sg.src.structure->convention;

  std::vector<std::vector<JVec>> vbar(m, std::vector<JVec>(m));
  for (int b = 0; b < m; ++b)
    for (int c = 0; c < m; ++c)
      vbar[b][c] = project_vertical(sg, covariant_derivative(gamma, E[b], E[c]));

  rie.assign(static_cast<std::size_t>(m) * m * m * m, 0.0);
  rie_vec.assign(static_cast<std::size_t>(m) * m * m, {});
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const JVec vbr = project_vertical(sg, lie_bracket(E[a], E[b]));
      for (int c = 0; c < m; ++c) {
        JVec r = project_vertical(sg, covariant_derivative(gamma, E[a], vbar[b][c]));
        r = vdiff(r, project_vertical(sg, covariant_derivative(gamma, E[b], vbar[a][c])));
        r = vdiff(r, project_vertical(sg, covariant_derivative(gamma, vbr, E[c])));
        r = vscale(r, eps);
        rie_vec[(a * m + b) * m + c] = values_of(r);
        for (int e = 0; e < m; ++e)
          rie[((a * m + b) * m + c) * m + e] = gval(sg.src, r, E[e]);
      }
    }

  ric = Mat<double>(m, m, 0.0);
  for (int b = 0; b < m; ++b)
    for (int c = 0; c < m; ++c) {
      double acc = 0.0;
      for (int a = 0; a < m; ++a) acc += rie[((a * m + b) * m + c) * m + a];
      ric(b, c) = acc;
    }
  scalar = 0.0;
  for (int b = 0; b < m; ++b) scalar += ric(b, b);
}

}  // namespace

FiberGeometry fiber_geometry(const SubmersionGeometry& sg) {
  FiberGeometry fg;
  fg.m = sg.split.m;
  fiber_side(sg, sg.src.gamma, fg.rie, fg.rie_vec, fg.ric, fg.scalar);
  fiber_side(sg, sg.src.gamma_star, fg.rie_star, fg.rie_vec_star, fg.ric_star, fg.scalar_star);
  const int m = fg.m;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int e = 0; e < m; ++e)
          fg.duality_max =
              std::max(fg.duality_max, std::abs(fg.rie4(a, b, c, e) + fg.rie4_star(a, b, e, c)));
  return fg;
}

BaseGeometry base_geometry(const SubmersionGeometry& sg) {
  BaseGeometry bg;
  const int eps = sg.tgt.structure->convention;
  bg.riem = curvature_tensor(sg.tgt, sg.tgt.gamma, eps);
  bg.riem_star = curvature_tensor(sg.tgt, sg.tgt.gamma_star, eps);
  const RicciScalar rs = ricci_and_scalar(sg.tgt, bg.riem);
  const RicciScalar rss = ricci_and_scalar(sg.tgt, bg.riem_star);
  bg.scalar = rs.scalar;
  bg.scalar_star = rss.scalar;

  const int n = sg.split.n;
  const int q = sg.tgt.dim();
  bg.ric = Mat<double>(n, n, 0.0);
  bg.ric_star = Mat<double>(n, n, 0.0);
  std::vector<std::vector<double>> xhat(n);
  for (int i = 0; i < n; ++i) xhat[i] = pushforward(sg, values_of(sg.split.horizontal[i]));
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      double acc = 0.0, acc_star = 0.0;
      for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) {
          acc += rs.ricci(a, b) * xhat[i][a] * xhat[l][b];
          acc_star += rss.ricci(a, b) * xhat[i][a] * xhat[l][b];
        }
      bg.ric(i, l) = acc;
      bg.ric_star(i, l) = acc_star;
    }
  return bg;
}

CurvatureIdentityCheck curvature_identity_check(const SubmersionGeometry& sg,
                                                const ONeillData& od, const FiberGeometry& fg,
                                                const BaseGeometry& bg) {
  CurvatureIdentityCheck out;
  const int m = sg.split.m;
  const int n = sg.split.n;
  const int eps = sg.src.structure->convention;
  const TensorValue riem = curvature_tensor(sg.src, sg.src.gamma, eps);

  std::vector<std::vector<double>> Ev(m), Xv(n), xhat(n);
  for (int a = 0; a < m; ++a) Ev[a] = values_of(sg.split.vertical[a]);
  for (int i = 0; i < n; ++i) {
    Xv[i] = values_of(sg.split.horizontal[i]);
    xhat[i] = pushforward(sg, Xv[i]);
  }

  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int e = 0; e < m; ++e) {
          const double lhs = curvature_pair(sg.src, riem, Ev[a], Ev[b], Ev[c], Ev[e]);
          const double rhs = fg.rie4(a, b, c, e) +
                             gval(sg.src, od.T_vv[a][c], od.Ts_vv[b][e]) -
                             gval(sg.src, od.T_vv[b][c], od.Ts_vv[a][e]);
          out.vertical_max = std::max(out.vertical_max, std::abs(lhs - rhs));
        }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double lhs = curvature_pair(sg.src, riem, Xv[i], Xv[j], Xv[k], Xv[l]);
          const double rhat =
              curvature_pair(sg.tgt, bg.riem, xhat[i], xhat[j], xhat[k], xhat[l]);
          const double rhs =
              rhat +
              gval(sg.src, vsum(od.A_hh[i][j], od.As_hh[i][j]), od.As_hh[k][l]) -
              gval(sg.src, od.A_hh[j][k], od.As_hh[i][l]) +
              gval(sg.src, od.A_hh[i][k], od.As_hh[j][l]);
          out.horizontal_max = std::max(out.horizontal_max, std::abs(lhs - rhs));
        }
  return out;
}

RicciIdentityCheck ricci_identity_check(const SubmersionGeometry& sg, const ONeillData& od,
                                        const FiberGeometry& fg, const BaseGeometry& bg) {
  RicciIdentityCheck out;
  const int m = sg.split.m;
  const int n = sg.split.n;
  const int eps = sg.src.structure->convention;
  const auto& E = sg.split.vertical;
  const auto& X = sg.split.horizontal;
  const Gamma& ga = sg.src.gamma;
  const Gamma& gs = sg.src.gamma_star;

  const TensorValue riem = curvature_tensor(sg.src, ga, eps);
  const RicciScalar rs = ricci_and_scalar(sg.src, riem);
  auto ric = [&](const std::vector<double>& u, const std::vector<double>& v) {
    double acc = 0.0;
    for (int a = 0; a < sg.src.dim(); ++a)
      for (int b = 0; b < sg.src.dim(); ++b) acc += rs.ricci(a, b) * u[a] * v[b];
    return acc;
  };

  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const double lhs = ric(values_of(E[a]), values_of(E[b]));
      const double fiber = fg.ric(a, b);
      const double t_n = -gval(sg.src, od.T_vv[a][b], od.Ns);
      double dT = 0.0;
      for (int i = 0; i < n; ++i) dT += gval(sg.src, nabla_T(sg, ga, X[i], E[a], E[b]), X[i]);
      double aa = 0.0;
      for (int i = 0; i < n; ++i) aa += gval(sg.src, od.A_hv[i][a], od.As_hv[i][b]);
      const double sig = -gval(sg.src, covariant_derivative(gs, E[a], od.sigma), E[b]);
      const double residual = lhs - (fiber + t_n + dT + aa + sig);
      out.vertical_max = std::max(out.vertical_max, std::abs(residual));
      if (a == b)
        out.vertical_terms.push_back({{"Ric(E,E)", lhs},
                                      {"fiber Ric(E,E)", fiber},
                                      {"-g(T_E E, N*)", t_n},
                                      {"(delta-hat T)(E,E)", dT},
                                      {"g(A E, A* E)", aa},
                                      {"-g(nabla*_E sigma, E)", sig},
                                      {"residual", residual}});
    }

  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      const double lhs = ric(values_of(X[i]), values_of(X[l]));
      const double base = bg.ric(i, l);
      const double nsd = gval(sg.src, covariant_derivative(gs, X[i], od.Ns), X[l]);
      double tt = 0.0;
      for (int a = 0; a < m; ++a) tt -= gval(sg.src, od.T_vh[a][i], od.T_vh[a][l]);
      double dA = 0.0;
      for (int a = 0; a < m; ++a) dA += gval(sg.src, nabla_A(sg, ga, E[a], X[i], X[l]), E[a]);
      const double sA = gval(sg.src, od.sigma, od.A_hh[i][l]);
      double aas = 0.0, asas = 0.0;
      for (int k = 0; k < n; ++k) {
        aas -= gval(sg.src, od.A_hh[i][k], od.As_hh[l][k]);
        asas -= gval(sg.src, od.As_hh[i][k], od.As_hh[l][k]);
      }
      const double residual = lhs - (base + nsd + tt + dA + sA + aas + asas);
      out.horizontal_max = std::max(out.horizontal_max, std::abs(residual));
      if (i == l)
        out.horizontal_terms.push_back({{"Ric(X,X)", lhs},
                                        {"base Ric(X,X)", base},
                                        {"g(nabla*_X N*, X)", nsd},
                                        {"-g(T X, T X)", tt},
                                        {"(delta-hat A)(X,X)", dA},
                                        {"g(sigma, A_X X)", sA},
                                        {"-g(A_X, A*_X)", aas},
                                        {"-g(A*_X, A*_X)", asas},
                                        {"residual", residual}});
    }
  return out;
}

ScalarDecomposition scalar_decomposition(const SubmersionGeometry& sg, const ONeillData& od,
                                         const FiberGeometry& fg, const BaseGeometry& bg) {
  ScalarDecomposition sd;
  const int eps = sg.src.structure->convention;
  const TensorValue riem = curvature_tensor(sg.src, sg.src.gamma, eps);
  sd.total_scalar = ricci_and_scalar(sg.src, riem).scalar;
  sd.fiber_scalar = fg.scalar;
  sd.base_scalar = bg.scalar;
  sd.lhs = sd.total_scalar - sd.fiber_scalar - sd.base_scalar;
  sd.terms = {{"-2 g(A,A)", -2.0 * od.norm2_A},
              {"g(A,A*)", od.pair_A_As},
              {"-g(T,T*)", -od.pair_T_Ts_h},
              {"-g(N,N*)", -od.pair_N_Ns},
              {"-delta-hat N", -od.hat_delta_N},
              {"-delta-hat* N*", -od.hat_delta_star_Ns},
              {"-delta-bar sigma", -od.bar_delta_sigma},
              {"delta-bar* sigma", od.bar_delta_star_sigma},
              {"g(sigma,sigma)", od.pair_sigma_sigma}};
  sd.rhs_sum = 0.0;
  for (const TermRow& t : sd.terms) sd.rhs_sum += t.value;
  sd.residual = sd.lhs - sd.rhs_sum;
  return sd;
}

ParallelDistributionCheck parallel_distribution_check(const ONeillData& od,
                                                      const SubmersionGeometry& sg,
                                                      double tol) {
  ParallelDistributionCheck out;
  for (int a = 0; a < od.m; ++a)
    for (int b = 0; b < od.m; ++b) {
      out.v_obstruction = std::max(out.v_obstruction, gnorm(sg.src, od.T_vv[a][b]));
      out.v_obstruction_star = std::max(out.v_obstruction_star, gnorm(sg.src, od.Ts_vv[a][b]));
    }
  for (int i = 0; i < od.n; ++i)
    for (int a = 0; a < od.m; ++a) {
      out.v_obstruction = std::max(out.v_obstruction, gnorm(sg.src, od.A_hv[i][a]));
      out.v_obstruction_star = std::max(out.v_obstruction_star, gnorm(sg.src, od.As_hv[i][a]));
    }
  for (int a = 0; a < od.m; ++a)
    for (int i = 0; i < od.n; ++i) {
      out.h_obstruction = std::max(out.h_obstruction, gnorm(sg.src, od.T_vh[a][i]));
      out.h_obstruction_star = std::max(out.h_obstruction_star, gnorm(sg.src, od.Ts_vh[a][i]));
    }
  for (int i = 0; i < od.n; ++i)
    for (int j = 0; j < od.n; ++j) {
      out.h_obstruction = std::max(out.h_obstruction, gnorm(sg.src, od.A_hh[i][j]));
      out.h_obstruction_star = std::max(out.h_obstruction_star, gnorm(sg.src, od.As_hh[i][j]));
    }
  out.vertical_parallel = out.v_obstruction <= tol;
  out.vertical_parallel_star = out.v_obstruction_star <= tol;
  out.horizontal_parallel = out.h_obstruction <= tol;
  out.horizontal_parallel_star = out.h_obstruction_star <= tol;
  return out;
}

}  // namespace statsub
