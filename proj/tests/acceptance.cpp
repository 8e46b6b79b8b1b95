// Acceptance gate: ten end-to-end checks, one printed PASS/FAIL line each.
// Every tolerance is pinned literally here so the gate cannot drift with
// library defaults.  The process exit code is the number of failed checks.

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "statsub/builtins.hpp"
#include "statsub/engine.hpp"
#include "statsub/errors.hpp"
#include "statsub/expr.hpp"
#include "statsub/geometry.hpp"
#include "statsub/inequalities.hpp"
#include "statsub/jet.hpp"
#include "statsub/manifest.hpp"
#include "statsub/report.hpp"
#include "statsub/solitons.hpp"
#include "statsub/structure.hpp"
#include "statsub/submersion.hpp"

using namespace statsub;
using nlohmann::ordered_json;

namespace {

struct Gate {
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    notes.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    require(std::abs(got - want) <= tol,
            what + " (got " + std::to_string(got) + ", want " + std::to_string(want) +
                " within " + std::to_string(tol) + ")");
  }
  void below(double got, double bound, const std::string& what) {
    require(got < bound,
            what + " (got " + std::to_string(got) + ", bound " + std::to_string(bound) + ")");
  }
};

bool any_warning_contains(const ordered_json& doc, const std::string& needle) {
  if (!doc.contains("warnings")) return false;
  for (const auto& w : doc["warnings"])
    if (w.get<std::string>().find(needle) != std::string::npos) return true;
  return false;
}

double rel(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<Vec<double>> value_span(const std::vector<JVec>& frame) {
  std::vector<Vec<double>> out;
  for (const auto& v : frame) out.push_back(values_of(v));
  return out;
}

// Conjugation identity from raw pieces: d_k g_ij - G^l_ki g_lj - G*^l_kj g_il.
double conjugation_residual(const PointGeometry& pg) {
  const int d = pg.dim();
  double worst = 0.0;
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double r = pg.g(i, j).grad(k);
        for (int l = 0; l < d; ++l)
          r -= pg.gamma(l, k, i).value() * pg.g(l, j).value() +
               pg.gamma_star(l, k, j).value() * pg.g(i, l).value();
        worst = std::max(worst, std::abs(r));
      }
  return worst;
}

double involution_residual(const StatisticalStructure& s, const PointGeometry& pg) {
  const ConnectionField ddual = dual_connection(dual_connection(s.nabla));
  const Gamma back = ddual.coefficients(s.metric, pg.g, pg.ginv, pg.x);
  const int d = pg.dim();
  double worst = 0.0;
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        worst = std::max(worst, std::abs(back(k, i, j).value() - pg.gamma(k, i, j).value()));
  return worst;
}

// Duality pairing <R(u,v)w, z> = -<R*(u,v)z, w> on random vectors, with each
// curvature tensor built independently from its own connection.
double duality_residual(const PointGeometry& pg, std::mt19937_64& rng) {
  const int d = pg.dim();
  const TensorValue riem = curvature_tensor(pg, pg.gamma, pg.structure->convention);
  const TensorValue riem_star = curvature_tensor(pg, pg.gamma_star, pg.structure->convention);
  double worst = 0.0;
  for (int t = 0; t < 4; ++t) {
    std::vector<double> u = oracles::random_point(rng, d), v = oracles::random_point(rng, d);
    std::vector<double> w = oracles::random_point(rng, d), z = oracles::random_point(rng, d);
    const double lhs = curvature_pair(pg, riem, u, v, w, z);
    const double rhs = curvature_pair(pg, riem_star, u, v, z, w);
    worst = std::max(worst, std::abs(lhs + rhs));
  }
  return worst;
}

struct Instances {
  SubmersionGeometry sg;
  ONeillData od;
  FiberGeometry fg;
  BaseGeometry bg;
};

Instances instances_at(const SubmersionSetup& setup, const std::vector<double>& x) {
  SubmersionGeometry sg = submersion_geometry(setup, x);
  ONeillData od = oneill_tensors(sg);
  FiberGeometry fg = fiber_geometry(sg);
  BaseGeometry bg = base_geometry(sg);
  return {std::move(sg), std::move(od), std::move(fg), std::move(bg)};
}

const InequalityReport* find_report(const InequalitySuite& s, const std::string& name) {
  for (const auto& r : s.reports)
    if (r.name == name) return &r;
  return nullptr;
}

Potential vector_potential(const std::vector<std::string>& comps,
                           const std::vector<std::string>& coords) {
  Potential pot;
  pot.kind = PotentialKind::Vector;
  for (const auto& t : comps) pot.components.push_back(Expression::parse(t, coords));
  return pot;
}

Potential gradient_potential(const std::string& psi, const std::vector<std::string>& coords) {
  Potential pot;
  pot.kind = PotentialKind::Gradient;
  pot.scalar = Expression::parse(psi, coords);
  return pot;
}

// ---------------------------------------------------------------------------
// 1. Builtin paper-example-4-7: Ricci diagonal, scalar under both sign
//    conventions, and the three discrepancy warnings.
Gate criterion_1() {
  Gate g;
  const Report rep = run(builtin_example("paper-example-4-7"));
  const ordered_json doc = ordered_json::parse(rep.json_text);
  g.require(doc.contains("analyses") && doc["analyses"].size() == 2, "two conventions analyzed");
  if (!g.ok) return g;

  const auto& plus = doc["analyses"][0];
  const auto& minus = doc["analyses"][1];
  g.require(plus["convention"].get<int>() == 1, "first analysis uses convention +1");
  g.require(minus["convention"].get<int>() == -1, "second analysis uses convention -1");

  const auto ricci = plus["curvature"]["ricci_diag"].get<std::vector<double>>();
  const std::vector<double> want = {4, 4, 4, 4, 4, 0};
  g.require(ricci.size() == want.size(), "Ricci diagonal has six entries");
  for (std::size_t i = 0; i < want.size() && i < ricci.size(); ++i)
    g.near(ricci[i], want[i], 1e-9, "Ricci diagonal entry " + std::to_string(i + 1));
  g.near(plus["curvature"]["scalar"].get<double>(), 20.0, 1e-9, "scalar under +1");
  g.near(minus["curvature"]["scalar"].get<double>(), -20.0, 1e-9, "scalar under -1");

  g.require(any_warning_contains(doc, "paper discrepancy: claimed statistical structure has "
                                      "nonzero torsion"),
            "torsion flagged as a paper-discrepancy warning");
  g.require(any_warning_contains(doc, "paper discrepancy: claimed statistical structure fails "
                                      "the Codazzi condition"),
            "Codazzi failure flagged as a paper-discrepancy warning");
  bool einstein_flagged = false;
  for (const auto& w : doc["warnings"]) {
    const std::string s = w.get<std::string>();
    if (s.rfind("paper discrepancy:", 0) == 0 && s.find("Einstein") != std::string::npos)
      einstein_flagged = true;
  }
  g.require(einstein_flagged, "non-Einstein Ricci flagged as a paper-discrepancy warning");
  return g;
}

// ---------------------------------------------------------------------------
// 2. Builtin paper-example-7-2 claims arithmetic: lambda = 5*rho - 2 exactly,
//    the three coupling cases, and the per-direction inconsistency row.
Gate criterion_2() {
  Gate g;
  const Report rep = run(builtin_example("paper-example-7-2"));
  const ordered_json doc = ordered_json::parse(rep.json_text);
  g.require(doc.contains("soliton_arithmetic"), "claims-driven arithmetic section present");
  if (!g.ok) return g;
  const auto& cases = doc["soliton_arithmetic"]["cases"];
  g.require(cases.size() == 3, "three coupling cases");
  if (!g.ok) return g;

  struct Want {
    double rho, lambda;
    const char* classification;
    const char* label;
  };
  const std::vector<Want> wants = {{0.5, 0.5, "expanding", "Einstein"},
                                   {0.2, -1.0, "shrinking", "Schouten"},
                                   {0.0, -2.0, "shrinking", "Ricci"}};
  for (std::size_t k = 0; k < wants.size(); ++k) {
    const auto& row = cases[k];
    const Want& w = wants[k];
    const std::string tag = "case rho = " + std::to_string(w.rho);
    g.near(row["rho"].get<double>(), w.rho, 0.0, tag + ": rho echoed");
    g.near(row["lambda"].get<double>(), w.lambda, 1e-12, tag + ": lambda = 5*rho - 2 exact");
    g.require(row["classification"].get<std::string>() == w.classification,
              tag + ": classification " + w.classification);
    g.require(row["lambda_match"].get<bool>(), tag + ": claimed lambda reproduced");
    g.require(row["classification_match"].get<bool>(), tag + ": claimed classification matches");
    g.require(row["label_match"].get<bool>(), tag + std::string(": label ") + w.label + " matched");

    const auto dirs = row["lambda_dir"].get<std::vector<double>>();
    g.require(dirs.size() == 3, tag + ": three per-direction values");
    if (dirs.size() == 3) {
      g.near(dirs[0], 5 * w.rho - 2, 1e-12, tag + ": direction 1 solves 5*rho - 2");
      g.near(dirs[1], 5 * w.rho - 2, 1e-12, tag + ": direction 2 solves 5*rho - 2");
      g.near(dirs[2], 5 * w.rho - 1, 1e-12, tag + ": direction 3 shows the 5*rho - 1 value");
    }
    g.near(row["lambda_spread"].get<double>(), 1.0, 1e-12, tag + ": per-direction spread is 1");
  }

  // Steady case sits exactly at 5*rho = 2; solve it directly from the same
  // claimed Ricci data.
  Mat<double> ric(3, 3, 0.0);
  ric(0, 0) = ric(1, 1) = 2.0;
  ric(2, 2) = 1.0;
  const SolitonPointReport steady = soliton_from_claims(ric, 5.0, 0.4, std::nullopt);
  g.near(steady.lambda, 0.0, 1e-12, "rho = 0.4 solves to lambda = 0");
  g.require(steady.classification == "steady", "rho = 0.4 classifies as steady");
  return g;
}

// ---------------------------------------------------------------------------
// 3. Builtin paper-example-7-2 geometry: rank, published frame spans, and the
//    horizontal isometry residual at ten random points.
Gate criterion_3() {
  Gate g;
  const SubmersionSetup setup = builtin_example("paper-example-7-2").submersion_setup();
  std::mt19937_64 rng(314159);
  for (int p = 0; p < 10; ++p) {
    const auto x = oracles::random_point(rng, 6);
    const SubmersionGeometry sg = submersion_geometry(setup, x);
    g.require(sg.split.rank == 3, "Jacobian rank 3 at point " + std::to_string(p + 1));
    g.below(max_principal_angle(value_span(sg.split.vertical), oracles::published_vertical_span()),
            1e-9, "vertical span matches the published subspaces");
    g.below(max_principal_angle(value_span(sg.split.horizontal), oracles::published_horizontal_span()),
            1e-9, "horizontal span matches the published subspaces");
    g.below(check_submersion(sg).isometry_max, 1e-10, "horizontal frames map isometrically");
    if (!g.ok) break;
  }
  return g;
}

// ---------------------------------------------------------------------------
// 4. Randomized structural suite: ten seed-fixed polynomial structures of
//    dimensions 2..4, twenty points each.
Gate criterion_4() {
  Gate g;
  std::mt19937_64 rng(271828);
  for (int n = 0; n < 10 && g.ok; ++n) {
    const int dim = 2 + n % 3;
    StatisticalStructure s = oracles::random_statistical_structure(rng, dim);
    for (int p = 0; p < 20 && g.ok; ++p) {
      const PointGeometry pg = point_geometry(s, oracles::random_point(rng, dim));
      g.below(conjugation_residual(pg), 1e-9, "conjugation identity");
      g.below(involution_residual(s, pg), 1e-12, "dual involution");
      g.below(duality_residual(pg, rng), 1e-8, "curvature duality pairing");
    }
  }
  for (int n = 0; n < 3 && g.ok; ++n) {
    StatisticalStructure s = oracles::trivial_structure(rng, 2 + n);
    for (int p = 0; p < 5 && g.ok; ++p) {
      const PointGeometry pg = point_geometry(s, oracles::random_point(rng, 2 + n));
      const int d = pg.dim();
      double worst = 0.0;
      for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            worst = std::max(worst,
                             std::abs(pg.gamma(k, i, j).value() - pg.gamma_star(k, i, j).value()));
      g.below(worst, 1e-12, "trivial structure is self-dual");
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// 5. Fundamental-tensor identities: alternation/symmetry/skew-adjointness plus
//    the two Gauss-type identities with independently computed sides; the
//    averaging builtin keeps its pinned violation values.
Gate criterion_5() {
  Gate g;
  std::mt19937_64 rng(161803);

  std::vector<std::pair<std::string, SubmersionSetup>> clean;
  clean.emplace_back("orthogonal-projection",
                     builtin_example("orthogonal-projection").submersion_setup());
  clean.emplace_back("warped-product", builtin_example("warped-product").submersion_setup());
  for (int k = 0; k < 3; ++k) {
    const int fiber_dim = 2 + k;
    const double a = oracles::uniform(rng, 0.05, 0.4);
    clean.emplace_back(
        "randomized warped " + std::to_string(k + 1),
        load_manifest_text(oracles::warped_manifest_text(fiber_dim, a, 0, 7 + k))
            .submersion_setup());
  }

  for (const auto& [name, setup] : clean) {
    const int d = setup.source.chart.dimension();
    for (int p = 0; p < 20 && g.ok; ++p) {
      const Instances inst = instances_at(setup, oracles::random_point(rng, d));
      g.below(inst.od.e3_max, 1e-8, name + ": T symmetry on vertical slots");
      g.below(inst.od.e4_max, 1e-8, name + ": A alternation on horizontal slots");
      g.below(inst.od.ss3_max, 1e-8, name + ": skew-adjointness pairing");
      g.below(inst.od.lemma_a_max, 1e-8, name + ": A against the vertical bracket");
      const CurvatureIdentityCheck ci =
          curvature_identity_check(inst.sg, inst.od, inst.fg, inst.bg);
      g.below(ci.vertical_max, 1e-6, name + ": vertical Gauss identity, independent sides");
      g.below(ci.horizontal_max, 1e-6, name + ": horizontal Gauss identity, independent sides");
    }
    if (!g.ok) return g;
  }

  // The averaging submersion carries connection torsion by construction; its
  // residuals are pinned constants rather than near-zeros.
  const SubmersionSetup avg = builtin_example("paper-example-7-2").submersion_setup();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int p = 0; p < 20 && g.ok; ++p) {
    const Instances inst = instances_at(avg, oracles::random_point(rng, 6));
    g.below(inst.od.e3_max, 1e-8, "averaging: T symmetry still holds");
    g.near(inst.od.e4_max, inv_sqrt2, 1e-9, "averaging: pinned alternation violation");
    g.below(inst.od.ss3_max, 1e-8, "averaging: skew-adjointness still holds");
    g.below(inst.od.lemma_a_max, 1e-8, "averaging: bracket identity still holds");
    const CurvatureIdentityCheck ci = curvature_identity_check(inst.sg, inst.od, inst.fg, inst.bg);
    g.below(ci.vertical_max, 1e-6, "averaging: vertical Gauss identity survives torsion");
    g.near(ci.horizontal_max, 0.5, 1e-9, "averaging: pinned horizontal Gauss violation");
  }
  return g;
}

// ---------------------------------------------------------------------------
// 6. Ricci and scalar decomposition identities with per-term tables, plus the
//    report-level finding mechanism when a residual exceeds tolerance.
Gate criterion_6() {
  Gate g;
  std::mt19937_64 rng(141421);
  std::vector<std::pair<std::string, SubmersionSetup>> setups;
  setups.emplace_back("orthogonal-projection",
                      builtin_example("orthogonal-projection").submersion_setup());
  setups.emplace_back("warped-product", builtin_example("warped-product").submersion_setup());

  for (const auto& [name, setup] : setups) {
    const int d = setup.source.chart.dimension();
    for (int p = 0; p < 10 && g.ok; ++p) {
      const Instances inst = instances_at(setup, oracles::random_point(rng, d));
      const RicciIdentityCheck ri = ricci_identity_check(inst.sg, inst.od, inst.fg, inst.bg);
      g.below(ri.vertical_max, 1e-6, name + ": vertical Ricci decomposition");
      g.below(ri.horizontal_max, 1e-6, name + ": horizontal Ricci decomposition");
      g.require(!ri.vertical_terms.empty() && !ri.vertical_terms[0].empty(),
                name + ": vertical term table emitted");
      g.require(!ri.horizontal_terms.empty() && !ri.horizontal_terms[0].empty(),
                name + ": horizontal term table emitted");
      const ScalarDecomposition sd = scalar_decomposition(inst.sg, inst.od, inst.fg, inst.bg);
      g.below(std::abs(sd.residual), 1e-6, name + ": scalar decomposition");
      g.require(sd.terms.size() == 9, name + ": nine-term scalar table emitted");
    }
    if (!g.ok) return g;
  }

  // Finding mechanism: the averaging builtin exceeds tolerance on the
  // horizontal Gauss identity, so the report must record a finding rather
  // than fail silently.
  const Report rep = run(builtin_example("paper-example-7-2"));
  const ordered_json doc = ordered_json::parse(rep.json_text);
  const auto& ids = doc["analyses"][0]["identities"];
  g.require(ids.contains("ricci_vertical_terms") && !ids["ricci_vertical_terms"].empty(),
            "report emits the vertical Ricci term table");
  g.require(ids["scalar_decomposition"].contains("terms"),
            "report emits the scalar decomposition term table");
  g.require(ids.contains("findings"), "identity findings recorded");
  bool c2_found = false;
  if (ids.contains("findings"))
    for (const auto& f : ids["findings"])
      if (f["identity"].get<std::string>() == "c2_horizontal_gauss" &&
          std::abs(f["residual"].get<double>() - 0.5) <= 1e-9)
        c2_found = true;
  g.require(c2_found, "horizontal Gauss violation recorded with its residual");
  g.require(any_warning_contains(doc, "identity c2_horizontal_gauss"),
            "identity violation surfaces as a warning");
  return g;
}

// ---------------------------------------------------------------------------
// 7. Inequalities: every bound is an equality on the trivial instance with
//    the T = 0 / A = 0 diagnostics, and the warped slack matches the closed
//    form with the proportionality condition firing.
Gate criterion_7() {
  Gate g;
  std::mt19937_64 rng(173205);

  const SubmersionSetup triv = builtin_example("orthogonal-projection").submersion_setup();
  for (int p = 0; p < 10 && g.ok; ++p) {
    const Instances inst = instances_at(triv, oracles::random_point(rng, 4));
    const InequalitySuite suite =
        evaluate_inequalities(inst.sg, inst.od, inst.fg, inst.bg);
    for (const auto& repn : suite.reports) {
      g.require(repn.applicable, "trivial: " + repn.name + " applicable");
      g.require(repn.satisfied, "trivial: " + repn.name + " satisfied");
      g.require(repn.equality, "trivial: " + repn.name + " is an equality");
      g.below(std::abs(repn.slack), 1e-10, "trivial: " + repn.name + " slack");
    }
    g.below(suite.diag.norm_T, 1e-12, "trivial: T = 0 diagnosis");
    g.below(suite.diag.norm_A, 1e-12, "trivial: A = 0 diagnosis");
  }
  if (!g.ok) return g;

  const SubmersionSetup warped = builtin_example("warped-product").submersion_setup();
  const double a = 0.25;  // matches the builtin metric (1 + x1^2/4)^2
  for (int p = 0; p < 10 && g.ok; ++p) {
    const auto x = oracles::random_point(rng, 3);
    const Instances inst = instances_at(warped, x);
    const InequalitySuite suite =
        evaluate_inequalities(inst.sg, inst.od, inst.fg, inst.bg);
    const double r = oracles::warped_ratio(a, x[0]);
    const double t2 = 2 * r * r;  // sum of |T_{E_i}E_j|^2 over the fiber frame
    const InequalityReport* block = find_report(suite, "vertical block scalar lower bound");
    g.require(block != nullptr, "vertical block bound present");
    if (block) {
      g.require(block->satisfied, "warped: block bound satisfied");
      g.near(block->slack, t2, 1e-9, "warped: slack equals the closed-form total T norm");
    }
    const InequalityReport* scal = find_report(suite, "scalar curvature lower bound");
    g.require(scal != nullptr && scal->equality,
              "warped: proportional T and T* give equality in the scalar bound");
    g.near(suite.diag.cosine_full, 1.0, 1e-12, "warped: alignment cosine is 1");
  }
  return g;
}

// ---------------------------------------------------------------------------
// 8. Soliton suite: trace bookkeeping, gradient/vector agreement, conformal
//    factors, constant transfer, the closed-form scalar with its singular
//    guard, and the harmonic classification flip.
Gate criterion_8() {
  Gate g;
  std::mt19937_64 rng(223606);

  for (int n = 0; n < 4 && g.ok; ++n) {
    const int dim = 2 + n % 3;
    StatisticalStructure s = oracles::random_statistical_structure(rng, dim);
    std::vector<std::string> comps;
    for (int k = 0; k < dim; ++k)
      comps.push_back(oracles::random_expr(rng, s.chart.coordinates, 1));
    const Potential pot = vector_potential(comps, s.chart.coordinates);
    const double rho = oracles::uniform(rng, -0.5, 0.8);
    for (int p = 0; p < 3 && g.ok; ++p) {
      const PointGeometry pg = point_geometry(s, oracles::random_point(rng, dim));
      g.below(soliton_point(pg, pot, rho, 0.4).trace_residual, 1e-8, "trace bookkeeping");
    }
  }
  if (!g.ok) return g;

  {
    // Gradient potential versus its metric-gradient vector form on a trivial
    // (Levi-Civita) structure: the flow tensors must agree.
    Chart chart = oracles::make_chart(2);
    const auto& c = chart.coordinates;
    std::map<std::pair<int, int>, Expression> m;
    m[{0, 0}] = Expression::parse("1 + 0.3*x1^2", c);
    m[{1, 1}] = Expression::parse("1 + 0.2*x2^2", c);
    StatisticalStructure s{chart, MetricField::from_entries(chart, m),
                           ConnectionField::levi_civita(), +1};
    const Potential grad = gradient_potential("sin(x1)*x2 + x1^2", c);
    const Potential vec = vector_potential(
        {"(cos(x1)*x2 + 2*x1)/(1 + 0.3*x1^2)", "sin(x1)/(1 + 0.2*x2^2)"}, c);
    for (int p = 0; p < 10 && g.ok; ++p) {
      const PointGeometry pg = point_geometry(s, oracles::random_point(rng, 2));
      const SolitonPointReport rg = soliton_point(pg, grad, 0.3, 0.7);
      const SolitonPointReport rv = soliton_point(pg, vec, 0.3, 0.7);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          g.near(rg.half_sym(i, j), rv.half_sym(i, j), 1e-8,
                 "gradient and vector potentials agree");
    }
  }
  if (!g.ok) return g;

  {
    Chart chart = oracles::make_chart(2);
    StatisticalStructure s{chart, MetricField::identity(chart), ConnectionField::levi_civita(),
                           +1};
    const PointGeometry pg = point_geometry(s, std::vector<double>{0.4, -0.7});
    const auto& c = chart.coordinates;
    auto field = [&](const std::vector<std::string>& comps) {
      JVec v;
      for (const auto& t : comps) v.push_back(Expression::parse(t, c).eval_jet(pg.x));
      return v;
    };
    const ConformalReport radial = conformal_diagnostic(pg, field({"x1", "x2"}));
    g.require(radial.conformal, "radial field is conformal");
    g.near(radial.phi, 1.0, 1e-12, "radial conformal factor");
    const ConformalReport rot = conformal_diagnostic(pg, field({"-x2", "x1"}));
    g.require(rot.conformal, "rotational field is conformal (Killing)");
    g.near(rot.phi, 0.0, 1e-12, "rotational conformal factor");
    g.below(rot.residual_max, 1e-12, "rotational field Killing residual");
  }

  {
    // With T = A = 0 the fiber constant equals the ambient one.
    const SubmersionSetup setup = builtin_example("orthogonal-projection").submersion_setup();
    const SubmersionGeometry sg =
        submersion_geometry(setup, std::vector<double>{0.1, 0.2, 0.3, 0.4});
    const ONeillData od = oneill_tensors(sg);
    const FiberGeometry fg = fiber_geometry(sg);
    PotentialData none;
    none.v = JVec(4, Jet2::constant(0.0, 4));
    const FiberSolitonReport rep = fiber_soliton(sg, od, fg, none, 0.3, 0.7, true);
    g.near(rep.capital_lambda, 0.7, 1e-12, "fiber constant equals lambda when T = A = 0");

    // Harmonic linear fiber potential: classification flips exactly at
    // rho/2 = 1/m (fiber dimension 2 here, so at rho = 1).
    const auto& c = setup.source.chart.coordinates;
    const PotentialData pd = eval_potential(sg.src, gradient_potential("x3", c));
    const PoissonReport low = poisson_analysis(sg, od, fg, pd, 0.9, 0.0);
    const PoissonReport mid = poisson_analysis(sg, od, fg, pd, 1.0, 0.0);
    const PoissonReport high = poisson_analysis(sg, od, fg, pd, 1.1, 0.0);
    g.require(low.harmonic && mid.harmonic && high.harmonic, "linear potential is harmonic");
    g.require(low.harmonic_classification == "shrinking", "rho below the flip shrinks");
    g.require(mid.harmonic_classification == "steady", "rho at the flip is steady");
    g.require(high.harmonic_classification == "expanding", "rho above the flip expands");
  }

  {
    const double rbar = einstein_fiber_scalar(3, 0.5, 1.0, 2.0);
    g.near(rbar, -36.0, 1e-12, "closed-form fiber scalar");
    g.near(rbar * (1.0 - 3 * 0.5 / 2.0), -3 * (1.0 + 2.0), 1e-12,
           "back-substitution of the closed form");
    bool threw = false;
    try {
      (void)einstein_fiber_scalar(4, 0.5, 1.0, 2.0);
    } catch (const SingularDenominator&) {
      threw = true;
    }
    g.require(threw, "singular denominator guard at m*rho = 2");
  }
  return g;
}

// ---------------------------------------------------------------------------
// 9. Jet derivatives against central finite differences on 100 random
//    expression/point pairs.
Gate criterion_9() {
  Gate g;
  std::mt19937_64 rng(577215);
  int pairs = 0;
  while (pairs < 100 && g.ok) {
    const int dim = 2 + static_cast<int>(rng() % 3);
    std::vector<std::string> coords;
    for (int i = 1; i <= dim; ++i) coords.push_back("x" + std::to_string(i));
    Expression f = Expression::parse(oracles::random_expr(rng, coords, 3), coords);
    const auto x = oracles::random_point(rng, dim);
    auto call = [&](const std::vector<double>& q) { return f.eval(q); };
    const Jet2 j = f.eval_jet(x);
    for (int i = 0; i < dim; ++i) {
      g.require(rel(j.grad(i), oracles::fd_gradient(call, x, i)) <= 1e-5,
                "gradient component " + std::to_string(i + 1) + " of pair " +
                    std::to_string(pairs + 1));
      for (int k = i; k < dim; ++k)
        g.require(rel(j.hess(i, k), oracles::fd_hessian(call, x, i, k)) <= 1e-5,
                  "Hessian component of pair " + std::to_string(pairs + 1));
    }
    ++pairs;
  }
  return g;
}

// ---------------------------------------------------------------------------
// 10. Determinism: identical manifest and seed give byte-identical reports.
Gate criterion_10() {
  Gate g;
  const Manifest man = builtin_example("paper-example-7-2");
  const Report a = run(man);
  const Report b = run(man);
  g.require(a.json_text == b.json_text, "builtin report is byte-identical across runs");

  const Manifest warped = load_manifest_text(oracles::warped_manifest_text(3, 0.2, 5, 42));
  const Report c = run(warped);
  const Report d = run(warped);
  g.require(c.json_text == d.json_text, "randomized-sampling report is byte-identical");
  return g;
}

struct Criterion {
  const char* description;
  std::function<Gate()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"builtin paper-example-4-7: Ricci diagonal, scalar under both conventions, discrepancy "
       "warnings",
       criterion_1},
      {"builtin paper-example-7-2: claims-data soliton constants, classifications, direction "
       "spread",
       criterion_2},
      {"builtin paper-example-7-2: Jacobian rank, published frame spans, horizontal isometry",
       criterion_3},
      {"randomized structures: conjugation, involution, curvature duality, self-duality",
       criterion_4},
      {"fundamental-tensor identities on builtin and randomized submersions", criterion_5},
      {"Ricci/scalar decomposition identities, term tables, finding mechanism", criterion_6},
      {"inequality suite: trivial equality diagnostics and warped-product slack", criterion_7},
      {"soliton suite: trace, potentials, conformal factors, closed forms, classifications",
       criterion_8},
      {"jet derivatives against central finite differences", criterion_9},
      {"byte-identical reports for identical manifest and seed", criterion_10},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Gate g;
    try {
      g = criteria[i].check();
    } catch (const std::exception& e) {
      g.ok = false;
      g.notes.push_back(std::string("exception: ") + e.what());
    }
    std::printf("ACCEPTANCE %2zu: %s — %s\n", i + 1, g.ok ? "PASS" : "FAIL",
                criteria[i].description);
    if (!g.ok) {
      ++failures;
      for (const auto& n : g.notes) std::printf("    %s\n", n.c_str());
    }
  }
  if (failures > 0) std::printf("%d of %zu acceptance criteria failed\n", failures, criteria.size());
  return failures;
}
