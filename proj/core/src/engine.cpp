#include "statsub/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "statsub/errors.hpp"
#include "statsub/geometry.hpp"
#include "statsub/inequalities.hpp"
#include "statsub/solitons.hpp"
#include "statsub/structure.hpp"
#include "statsub/submersion.hpp"

namespace statsub {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

json mat_json(const Mat<double>& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> mat_diag(const Mat<double>& m) {
  std::vector<double> d;
  for (int i = 0; i < std::min(m.rows(), m.cols()); ++i) d.push_back(m(i, i));
  return d;
}

json terms_json(const std::vector<TermRow>& rows) {
  json out = json::array();
  for (const TermRow& r : rows) out.push_back({{"term", r.name}, {"value", r.value}});
  return out;
}

json einstein_json(const EinsteinCheck& e) {
  json out;
  out["is_einstein"] = e.is_einstein;
  out["factor"] = e.factor;
  out["diag_spread"] = e.diag_spread;
  out["offdiag_max"] = e.offdiag_max;
  return out;
}

// Uniform double in [0,1) from the top 53 bits of the generator output, so
// the stream is reproducible independent of the platform's distribution
// implementations.
double unit_from(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<std::vector<double>> sample_points(const EvaluationSpec& ev, int dim) {
  std::vector<std::vector<double>> xs = ev.points;
  if (ev.random_count > 0) {
    std::mt19937_64 rng(ev.seed);
    for (int i = 0; i < ev.random_count; ++i) {
      std::vector<double> x(dim);
      for (int j = 0; j < dim; ++j) {
        const auto [lo, hi] = ev.box[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(j)] = lo + (hi - lo) * unit_from(rng);
      }
      xs.push_back(std::move(x));
    }
  }
  return xs;
}

// g(R(d_i,d_j)d_k, d_l) from the (1,3) coordinate components.
double rie4_coord(const PointGeometry& pg, const TensorValue& riem, int i, int j, int k, int l) {
  double s = 0.0;
  for (int m = 0; m < pg.dim(); ++m) s += riem.at({m, i, j, k}) * pg.g(m, l).value();
  return s;
}

double constant_curvature_residual(const PointGeometry& pg, const TensorValue& riem,
                                   double kappa) {
  const int d = pg.dim();
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const double model = kappa * (pg.g(j, k).value() * pg.g(i, l).value() -
                                        pg.g(i, k).value() * pg.g(j, l).value());
          worst = std::max(worst, std::abs(rie4_coord(pg, riem, i, j, k, l) - model));
        }
  return worst;
}

double curvature_duality_residual(const PointGeometry& pg, const TensorValue& riem,
                                  const TensorValue& riem_star) {
  const int d = pg.dim();
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          worst = std::max(worst, std::abs(rie4_coord(pg, riem, i, j, k, l) +
                                           rie4_coord(pg, riem_star, i, j, l, k)));
  return worst;
}

Potential zero_potential(const Chart& chart) {
  Potential pot;
  pot.kind = PotentialKind::Vector;
  for (int i = 0; i < chart.dimension(); ++i)
    pot.components.push_back(Expression::parse("0", chart.coordinates));
  return pot;
}

}  // namespace

Report run(const Manifest& manifest, const RunOptions& options) {
  Manifest man = manifest;
  if (options.random_count) man.evaluation.random_count = *options.random_count;
  if (options.seed) man.evaluation.seed = *options.seed;
  if (options.tolerance_scale != 1.0) man.tolerances.scale(options.tolerance_scale);
  const Tolerances tol = man.tolerances;
  const std::vector<int> conventions = options.conventions.value_or(man.conventions);
  const int d = man.source.dimension();
  const auto xs = sample_points(man.evaluation, d);

  json doc;
  doc["schema_version"] = 1;
  if (!man.name.empty()) doc["name"] = man.name;
  {
    json info;
    info["seed"] = man.evaluation.seed;
    info["explicit_points"] = static_cast<int>(man.evaluation.points.size());
    info["random_points"] = man.evaluation.random_count;
    info["tolerance_scale"] = options.tolerance_scale;
    info["conventions"] = conventions;
    doc["run"] = info;
  }
  {
    json t;
    t["conjugation"] = tol.conjugation;
    t["involution"] = tol.involution;
    t["duality"] = tol.duality;
    t["statistical"] = tol.statistical;
    t["spd"] = tol.spd;
    t["identity"] = tol.identity;
    t["oneill"] = tol.oneill;
    t["einstein"] = tol.einstein;
    t["spread"] = tol.spread;
    t["band"] = tol.band;
    t["singular"] = tol.singular;
    t["angle"] = tol.angle;
    t["isometry"] = tol.isometry;
    doc["tolerances"] = t;
  }
  doc["sample_points"] = xs;

  std::vector<std::string> warnings;
  json findings = json::array();
  json point_errors = json::array();

  json claims;
  const bool have_claims = !man.claims_text.empty();
  if (have_claims) claims = json::parse(man.claims_text);
  auto add_finding = [&](const std::string& what, const json& claimed, const json& computed) {
    json f;
    f["finding"] = what;
    f["claimed"] = claimed;
    f["computed"] = computed;
    findings.push_back(f);
    warnings.push_back("paper discrepancy: " + what);
  };

  // ---- Stage: source point geometries (shared across conventions) ----
  std::vector<std::optional<PointGeometry>> pgs(xs.size());
  std::vector<std::size_t> good;
  std::string first_error;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    try {
      pgs[i].emplace(point_geometry(man.source, xs[i], tol.spd));
      good.push_back(i);
    } catch (const Error& e) {
      point_errors.push_back({{"point", i}, {"stage", "metric"}, {"error", e.what()}});
      if (first_error.empty()) first_error = e.what();
    }
  }
  if (good.empty())
    throw DegenerateMetric("metric evaluation failed at every sample point: " + first_error);
  const std::size_t rep = good.front();

  // ---- Stage: statistical structure checks ----
  {
    double torsion = 0.0, codazzi = 0.0, conjugation = 0.0, involution = 0.0;
    const ConnectionField ddual = dual_connection(dual_connection(man.source.nabla));
    for (std::size_t i : good) {
      const PointGeometry& pg = *pgs[i];
      const StatisticalCheck sc = check_statistical(pg, tol.statistical);
      torsion = std::max(torsion, sc.torsion_max);
      codazzi = std::max(codazzi, sc.codazzi_max);
      conjugation = std::max(conjugation, sc.conjugation_max);
      const Gamma gdd = ddual.coefficients(man.source.metric, pg.g, pg.ginv, pg.x);
      for (int k = 0; k < d; ++k)
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b)
            involution = std::max(
                involution, std::abs(gdd(k, a, b).value() - pg.gamma(k, a, b).value()));
    }
    const bool statistical =
        torsion <= tol.statistical && codazzi <= tol.statistical && conjugation <= tol.statistical;
    json sec;
    sec["dimension"] = d;
    sec["coordinates"] = man.source.chart.coordinates;
    sec["torsion_max"] = torsion;
    sec["codazzi_max"] = codazzi;
    sec["conjugation_max"] = conjugation;
    sec["involution_max"] = involution;
    sec["statistical"] = statistical;
    doc["statistical_structure"] = sec;

    const bool claimed_statistical =
        have_claims && claims.value("statistical", false);
    if (torsion > tol.statistical) {
      warnings.push_back("connection has torsion (residual " + fmt(torsion) + ")");
      if (claimed_statistical)
        add_finding("claimed statistical structure has nonzero torsion", true, torsion);
    }
    if (codazzi > tol.statistical) {
      warnings.push_back("Codazzi condition fails (residual " + fmt(codazzi) + ")");
      if (claimed_statistical)
        add_finding("claimed statistical structure fails the Codazzi condition", true, codazzi);
    }
    if (conjugation > tol.statistical)
      warnings.push_back("conjugation residual " + fmt(conjugation) + " exceeds tolerance");
  }

  // ---- Stage: submersion split and fundamental tensors (convention-free) ----
  std::optional<SubmersionSetup> setup;
  std::vector<std::optional<SubmersionGeometry>> sgs(xs.size());
  std::vector<std::size_t> sgood;
  if (man.map) {
    setup.emplace(man.submersion_setup());
    std::string serr;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!pgs[i]) continue;
      try {
        sgs[i].emplace(submersion_geometry(*setup, xs[i], tol.spd));
        sgood.push_back(i);
      } catch (const Error& e) {
        point_errors.push_back({{"point", i}, {"stage", "submersion"}, {"error", e.what()}});
        if (serr.empty()) serr = e.what();
      }
    }
    if (sgood.empty())
      throw RankDeficient("submersion split failed at every sample point: " + serr);

    SubmersionCheck agg{};
    agg.rank = sgs[sgood.front()]->split.rank;
    bool riemannian = true, statistical = true;
    double e3 = 0.0, e4 = 0.0, ss3 = 0.0, lemma_a = 0.0;
    ParallelDistributionCheck par_agg{};
    par_agg.vertical_parallel = par_agg.vertical_parallel_star = true;
    par_agg.horizontal_parallel = par_agg.horizontal_parallel_star = true;
    for (std::size_t i : sgood) {
      const SubmersionGeometry& sg = *sgs[i];
      const SubmersionCheck sc = check_submersion(sg, tol.statistical);
      agg.rank = std::min(agg.rank, sc.rank);
      agg.isometry_max = std::max(agg.isometry_max, sc.isometry_max);
      agg.statistical_max = std::max(agg.statistical_max, sc.statistical_max);
      agg.statistical_star_max = std::max(agg.statistical_star_max, sc.statistical_star_max);
      riemannian = riemannian && sc.riemannian;
      statistical = statistical && sc.statistical;
      const ONeillData od = oneill_tensors(sg);
      e3 = std::max(e3, od.e3_max);
      e4 = std::max(e4, od.e4_max);
      ss3 = std::max(ss3, od.ss3_max);
      lemma_a = std::max(lemma_a, od.lemma_a_max);
      const ParallelDistributionCheck pc = parallel_distribution_check(od, sg, tol.oneill);
      par_agg.v_obstruction = std::max(par_agg.v_obstruction, pc.v_obstruction);
      par_agg.v_obstruction_star = std::max(par_agg.v_obstruction_star, pc.v_obstruction_star);
      par_agg.h_obstruction = std::max(par_agg.h_obstruction, pc.h_obstruction);
      par_agg.h_obstruction_star = std::max(par_agg.h_obstruction_star, pc.h_obstruction_star);
      par_agg.vertical_parallel = par_agg.vertical_parallel && pc.vertical_parallel;
      par_agg.vertical_parallel_star =
          par_agg.vertical_parallel_star && pc.vertical_parallel_star;
      par_agg.horizontal_parallel = par_agg.horizontal_parallel && pc.horizontal_parallel;
      par_agg.horizontal_parallel_star =
          par_agg.horizontal_parallel_star && pc.horizontal_parallel_star;
    }
    const ONeillData od_rep = oneill_tensors(*sgs[sgood.front()]);

    json sec;
    sec["total_dimension"] = setup->total_dim();
    sec["base_dimension"] = setup->base_dim();
    sec["fiber_dimension"] = setup->fiber_dim();
    sec["jacobian_rank"] = agg.rank;
    sec["isometry_max"] = agg.isometry_max;
    sec["connection_residual_max"] = agg.statistical_max;
    sec["dual_connection_residual_max"] = agg.statistical_star_max;
    sec["riemannian"] = riemannian;
    sec["statistical"] = statistical;
    {
      json oneill;
      oneill["N"] = values_of(od_rep.N);
      oneill["N_star"] = values_of(od_rep.Ns);
      oneill["H"] = values_of(od_rep.H);
      oneill["H_star"] = values_of(od_rep.Hs);
      oneill["sigma"] = values_of(od_rep.sigma);
      oneill["delta_hat_N"] = od_rep.hat_delta_N;
      oneill["delta_hat_star_N_star"] = od_rep.hat_delta_star_Ns;
      oneill["div_N"] = od_rep.div_N;
      oneill["div_star_N_star"] = od_rep.div_star_Ns;
      oneill["delta_bar_sigma"] = od_rep.bar_delta_sigma;
      oneill["delta_bar_star_sigma"] = od_rep.bar_delta_star_sigma;
      oneill["norm2_T_horizontal_slots"] = od_rep.norm2_T_h;
      oneill["norm2_T_star_horizontal_slots"] = od_rep.norm2_Ts_h;
      oneill["norm2_T_vertical_pairs"] = od_rep.norm2_T_vv;
      oneill["norm2_T_star_vertical_pairs"] = od_rep.norm2_Ts_vv;
      oneill["norm2_T_full"] = od_rep.norm2_T_full;
      oneill["norm2_T_star_full"] = od_rep.norm2_Ts_full;
      oneill["norm2_A"] = od_rep.norm2_A;
      oneill["norm2_A_star"] = od_rep.norm2_As;
      oneill["pair_T_T_star_horizontal_slots"] = od_rep.pair_T_Ts_h;
      oneill["pair_T_T_star_vertical_pairs"] = od_rep.pair_T_Ts_vv;
      oneill["pair_T_T_star_full"] = od_rep.pair_T_Ts_full;
      oneill["pair_A_A_star"] = od_rep.pair_A_As;
      oneill["pair_N_N_star"] = od_rep.pair_N_Ns;
      oneill["pair_sigma_sigma"] = od_rep.pair_sigma_sigma;
      json res;
      res["e3_symmetry_max"] = e3;
      res["e4_alternation_max"] = e4;
      res["ss3_skew_adjointness_max"] = ss3;
      res["a_conjugate_skew_max"] = lemma_a;
      oneill["identity_residuals"] = res;
      sec["oneill"] = oneill;
    }
    {
      json par;
      par["v_obstruction"] = par_agg.v_obstruction;
      par["v_obstruction_star"] = par_agg.v_obstruction_star;
      par["h_obstruction"] = par_agg.h_obstruction;
      par["h_obstruction_star"] = par_agg.h_obstruction_star;
      par["vertical_parallel"] = par_agg.vertical_parallel;
      par["vertical_parallel_star"] = par_agg.vertical_parallel_star;
      par["horizontal_parallel"] = par_agg.horizontal_parallel;
      par["horizontal_parallel_star"] = par_agg.horizontal_parallel_star;
      sec["parallel_distributions"] = par;
    }
    doc["submersion"] = sec;

    if (agg.isometry_max > tol.isometry)
      warnings.push_back("horizontal isometry residual " + fmt(agg.isometry_max) +
                         " exceeds tolerance (not a Riemannian submersion on the sampled points)");
    if (agg.statistical_max > tol.statistical || agg.statistical_star_max > tol.statistical)
      warnings.push_back(
          "statistical submersion residual " +
          fmt(std::max(agg.statistical_max, agg.statistical_star_max)) +
          " exceeds tolerance (pushforward of basic-lift derivatives differs from the target "
          "connection)");
    if (e4 > tol.oneill)
      warnings.push_back("alternating-tensor identity residual " + fmt(e4) +
                         " exceeds tolerance (A differs from half the vertical bracket)");
    if (have_claims && claims.contains("jacobian_rank")) {
      const int claimed = claims["jacobian_rank"].get<int>();
      if (claimed != agg.rank)
        add_finding("claimed Jacobian rank differs from the computed rank", claimed, agg.rank);
    }
  }

  // ---- Stage: per-convention curvature, identities, inequalities, solitons ----
  std::deque<StatisticalStructure> struct_store;
  std::deque<SubmersionSetup> setup_store;
  const Potential potential = (man.soliton && man.soliton->potential)
                                  ? *man.soliton->potential
                                  : zero_potential(man.source.chart);

  struct ConvData {
    int conv = 0;
    double scalar = 0.0;
    std::vector<double> ricci_diag;
    EinsteinCheck einstein;
    double const_curv_residual = 0.0;
    bool has_fiber = false;
    std::vector<double> fiber_ricci_diag;
    double fiber_scalar = 0.0;
  };
  std::vector<ConvData> conv_data;

  json analyses = json::array();
  for (const int conv : conventions) {
    json a;
    a["convention"] = conv;
    ConvData cd;
    cd.conv = conv;

    struct_store.push_back(man.source);
    StatisticalStructure& src_c = struct_store.back();
    src_c.convention = conv;
    std::vector<std::optional<PointGeometry>> cpgs(xs.size());
    for (std::size_t i : good) cpgs[i].emplace(point_geometry(src_c, xs[i], tol.spd));

    // Total-space curvature.
    {
      double duality = 0.0;
      for (std::size_t i : good) {
        const PointGeometry& pg = *cpgs[i];
        const TensorValue riem = curvature_tensor(pg, pg.gamma, conv);
        const TensorValue riem_star = curvature_tensor(pg, pg.gamma_star, conv);
        duality = std::max(duality, curvature_duality_residual(pg, riem, riem_star));
      }
      const PointGeometry& pg = *cpgs[rep];
      const TensorValue riem = curvature_tensor(pg, pg.gamma, conv);
      const TensorValue riem_star = curvature_tensor(pg, pg.gamma_star, conv);
      const RicciScalar rs = ricci_and_scalar(pg, riem);
      const RicciScalar rs_star = ricci_and_scalar(pg, riem_star);
      const EinsteinCheck ec = einstein_check(pg, rs.ricci, tol.einstein);
      const double kappa = d > 1 ? rs.scalar / (d * (d - 1.0)) : 0.0;
      const double cc_res = constant_curvature_residual(pg, riem, kappa);

      json curv;
      curv["ricci_diag"] = mat_diag(rs.ricci);
      curv["ricci"] = mat_json(rs.ricci);
      curv["ricci_spectrum"] = sym_eigenvalues(rs.ricci);
      curv["scalar"] = rs.scalar;
      curv["ricci_dual_diag"] = mat_diag(rs_star.ricci);
      curv["scalar_dual"] = rs_star.scalar;
      curv["duality_residual_max"] = duality;
      curv["einstein"] = einstein_json(ec);
      json cc;
      cc["kappa"] = kappa;
      cc["residual_max"] = cc_res;
      curv["constant_curvature_fit"] = cc;
      a["curvature"] = curv;

      cd.scalar = rs.scalar;
      cd.ricci_diag = mat_diag(rs.ricci);
      cd.einstein = ec;
      cd.const_curv_residual = cc_res;
      if (duality > tol.duality)
        warnings.push_back("curvature duality residual " + fmt(duality) +
                           " exceeds tolerance under convention " + fmt(conv));
    }

    // Submersion analyses that depend on the curvature convention.
    std::vector<std::optional<SubmersionGeometry>> csgs(xs.size());
    std::optional<ONeillData> od_rep;
    std::optional<FiberGeometry> fg_rep;
    std::optional<BaseGeometry> bg_rep;
    if (setup) {
      setup_store.push_back(*setup);
      SubmersionSetup& setup_c = setup_store.back();
      setup_c.source.convention = conv;
      setup_c.target.convention = conv;
      for (std::size_t i : sgood) csgs[i].emplace(submersion_geometry(setup_c, xs[i], tol.spd));
      const std::size_t srep = sgood.front();

      double c1 = 0.0, c2 = 0.0, r13 = 0.0, r14 = 0.0, eq1 = 0.0;
      for (std::size_t i : sgood) {
        const SubmersionGeometry& sg = *csgs[i];
        const ONeillData od = oneill_tensors(sg);
        const FiberGeometry fg = fiber_geometry(sg);
        const BaseGeometry bg = base_geometry(sg);
        const CurvatureIdentityCheck ci = curvature_identity_check(sg, od, fg, bg);
        const RicciIdentityCheck ri = ricci_identity_check(sg, od, fg, bg);
        const ScalarDecomposition sd = scalar_decomposition(sg, od, fg, bg);
        c1 = std::max(c1, ci.vertical_max);
        c2 = std::max(c2, ci.horizontal_max);
        r13 = std::max(r13, ri.vertical_max);
        r14 = std::max(r14, ri.horizontal_max);
        eq1 = std::max(eq1, std::abs(sd.residual));
      }
      const SubmersionGeometry& sg = *csgs[srep];
      od_rep = oneill_tensors(sg);
      fg_rep = fiber_geometry(sg);
      bg_rep = base_geometry(sg);
      const RicciIdentityCheck ri = ricci_identity_check(sg, *od_rep, *fg_rep, *bg_rep);
      const ScalarDecomposition sd = scalar_decomposition(sg, *od_rep, *fg_rep, *bg_rep);

      {
        json fiber;
        fiber["ricci_diag"] = mat_diag(fg_rep->ric);
        fiber["ricci"] = mat_json(fg_rep->ric);
        fiber["scalar"] = fg_rep->scalar;
        fiber["ricci_dual_diag"] = mat_diag(fg_rep->ric_star);
        fiber["scalar_dual"] = fg_rep->scalar_star;
        fiber["duality_residual_max"] = fg_rep->duality_max;
        fiber["einstein"] = einstein_json(einstein_check_matrix(fg_rep->ric, tol.einstein));
        a["fiber"] = fiber;
        cd.has_fiber = true;
        cd.fiber_ricci_diag = mat_diag(fg_rep->ric);
        cd.fiber_scalar = fg_rep->scalar;

        json base;
        base["ricci"] = mat_json(bg_rep->ric);
        base["scalar"] = bg_rep->scalar;
        base["scalar_dual"] = bg_rep->scalar_star;
        a["base"] = base;
      }
      {
        json ids;
        ids["c1_vertical_gauss_max"] = c1;
        ids["c2_horizontal_gauss_max"] = c2;
        ids["ricci_vertical_1c3_max"] = r13;
        ids["ricci_horizontal_1c4_max"] = r14;
        ids["scalar_decomposition_residual_max"] = eq1;
        json vt = json::array();
        for (std::size_t k = 0; k < ri.vertical_terms.size(); ++k) {
          json row;
          row["direction"] = "E_" + std::to_string(k + 1);
          for (const TermRow& t : ri.vertical_terms[k]) row[t.name] = t.value;
          vt.push_back(row);
        }
        ids["ricci_vertical_terms"] = vt;
        json ht = json::array();
        for (std::size_t k = 0; k < ri.horizontal_terms.size(); ++k) {
          json row;
          row["direction"] = "X_" + std::to_string(k + 1);
          for (const TermRow& t : ri.horizontal_terms[k]) row[t.name] = t.value;
          ht.push_back(row);
        }
        ids["ricci_horizontal_terms"] = ht;
        json sdj;
        sdj["total_scalar"] = sd.total_scalar;
        sdj["fiber_scalar"] = sd.fiber_scalar;
        sdj["base_scalar"] = sd.base_scalar;
        sdj["lhs"] = sd.lhs;
        sdj["terms"] = terms_json(sd.terms);
        sdj["rhs_sum"] = sd.rhs_sum;
        sdj["residual"] = sd.residual;
        ids["scalar_decomposition"] = sdj;

        json id_findings = json::array();
        const bool clean = doc["statistical_structure"]["statistical"].get<bool>() &&
                           doc["submersion"]["statistical"].get<bool>();
        auto id_finding = [&](const std::string& label, double residual) {
          if (residual <= tol.identity) return;
          json f;
          f["identity"] = label;
          f["residual"] = residual;
          f["hypothesis_clean"] = clean;
          id_findings.push_back(f);
          warnings.push_back("identity " + label + " residual " + fmt(residual) +
                             " exceeds tolerance under convention " + fmt(conv) +
                             (clean ? " on a hypothesis-clean instance" :
                                      " (structure hypotheses already violated)"));
        };
        id_finding("c1_vertical_gauss", c1);
        id_finding("c2_horizontal_gauss", c2);
        id_finding("ricci_vertical_1c3", r13);
        id_finding("ricci_horizontal_1c4", r14);
        id_finding("scalar_decomposition", eq1);
        if (!id_findings.empty()) ids["findings"] = id_findings;
        a["identities"] = ids;
      }
      {
        // Inequalities: representative values plus worst slack across points.
        const InequalitySuite rep_suite =
            evaluate_inequalities(sg, *od_rep, *fg_rep, *bg_rep, tol.oneill);
        std::vector<double> min_slack(rep_suite.reports.size(),
                                      std::numeric_limits<double>::infinity());
        std::vector<bool> all_satisfied(rep_suite.reports.size(), true);
        std::vector<bool> all_equality(rep_suite.reports.size(), true);
        for (std::size_t i : sgood) {
          const SubmersionGeometry& sgi = *csgs[i];
          const ONeillData odi = oneill_tensors(sgi);
          const FiberGeometry fgi = fiber_geometry(sgi);
          const BaseGeometry bgi = base_geometry(sgi);
          const InequalitySuite s = evaluate_inequalities(sgi, odi, fgi, bgi, tol.oneill);
          for (std::size_t k = 0; k < s.reports.size() && k < min_slack.size(); ++k) {
            min_slack[k] = std::min(min_slack[k], s.reports[k].slack);
            all_satisfied[k] = all_satisfied[k] && s.reports[k].satisfied;
            all_equality[k] = all_equality[k] && s.reports[k].equality;
          }
        }
        json summary = json::array();
        json details = json::array();
        for (std::size_t k = 0; k < rep_suite.reports.size(); ++k) {
          const InequalityReport& r = rep_suite.reports[k];
          json row;
          row["name"] = r.name;
          row["direction"] = r.direction;
          row["lhs"] = r.lhs;
          row["rhs"] = r.rhs;
          row["slack"] = r.slack;
          row["min_slack_over_points"] = min_slack[k];
          row["satisfied"] = all_satisfied[k];
          row["equality"] = all_equality[k];
          row["applicable"] = r.applicable;
          if (!r.note.empty()) row["note"] = r.note;
          summary.push_back(row);
          if (!r.terms.empty()) {
            json det;
            det["name"] = r.name;
            det["direction"] = r.direction;
            det["terms"] = terms_json(r.terms);
            details.push_back(det);
          }
        }
        json ineq;
        ineq["summary"] = summary;
        json diag;
        diag["norm_T"] = rep_suite.diag.norm_T;
        diag["norm_T_star"] = rep_suite.diag.norm_Ts;
        diag["cosine_horizontal_slots"] = rep_suite.diag.cosine_h;
        diag["cosine_full"] = rep_suite.diag.cosine_full;
        diag["norm_A"] = rep_suite.diag.norm_A;
        diag["max_vertical_bracket"] = rep_suite.diag.max_v_bracket;
        diag["cauchy_schwarz_residual"] = rep_suite.cs_residual;
        ineq["equality_diagnostics"] = diag;
        ineq["details"] = details;
        a["inequalities"] = ineq;
      }

      // Fiber claims, evaluated under this convention.
      if (have_claims) {
        json rows = json::array();
        const bool primary = conv == conventions.front();
        if (claims.contains("fiber_ricci_diag")) {
          const auto claimed = claims["fiber_ricci_diag"].get<std::vector<double>>();
          const auto computed = mat_diag(fg_rep->ric);
          bool match = claimed.size() == computed.size();
          for (std::size_t k = 0; match && k < claimed.size(); ++k)
            match = close(claimed[k], computed[k], tol.identity);
          rows.push_back({{"claim", "fiber_ricci_diag"},
                          {"claimed", claimed},
                          {"computed", computed},
                          {"match", match}});
          if (!match && primary)
            add_finding("claimed fiber Ricci diagonal differs from the computed diagonal",
                        claimed, computed);
        }
        if (claims.contains("fiber_scalar")) {
          const double claimed = claims["fiber_scalar"].get<double>();
          const bool match = close(claimed, fg_rep->scalar, tol.identity);
          rows.push_back({{"claim", "fiber_scalar"},
                          {"claimed", claimed},
                          {"computed", fg_rep->scalar},
                          {"match", match}});
          if (!match && primary)
            add_finding("claimed fiber scalar curvature differs from the computed value", claimed,
                        fg_rep->scalar);
        }
        if (claims.contains("fiber_curvature_samples")) {
          for (const json& s : claims["fiber_curvature_samples"]) {
            const auto args = s["args"].get<std::vector<int>>();
            const double claimed = s["value"].get<double>();
            const double computed =
                fg_rep->rie4(args[0] - 1, args[1] - 1, args[2] - 1, args[3] - 1);
            const bool match = close(claimed, computed, tol.identity);
            rows.push_back({{"claim", "fiber_curvature_sample"},
                            {"args", args},
                            {"claimed", claimed},
                            {"computed", computed},
                            {"match", match}});
            if (!match && primary)
              add_finding("claimed fiber curvature component differs from the computed value",
                          s, computed);
          }
        }
        if (!rows.empty()) a["fiber_claims"] = rows;
      }
    }

    // Soliton analyses.
    if (man.soliton) {
      const SolitonSpec& sol = *man.soliton;
      const std::optional<double> lam_fixed =
          sol.solve_lambda ? std::nullopt : std::optional<double>(sol.lambda);
      json s;
      s["restriction"] = sol.restriction;
      s["rho"] = sol.rho;
      s["potential"] = !man.soliton->potential ? "none"
                       : sol.potential->kind == PotentialKind::Vector    ? "vector"
                       : sol.potential->kind == PotentialKind::Gradient ? "gradient"
                                                                         : "conformal";
      try {
        if (sol.restriction == "total") {
          double residual = 0.0, trace = 0.0;
          std::vector<double> lambda_by_point;
          std::optional<SolitonPointReport> r0;
          for (std::size_t i : good) {
            const SolitonPointReport r =
                soliton_point(*cpgs[i], potential, sol.rho, lam_fixed, tol.spread, tol.band);
            residual = std::max(residual, r.residual_max);
            trace = std::max(trace, std::abs(r.trace_residual));
            lambda_by_point.push_back(r.lambda);
            if (!r0) r0 = r;
          }
          const auto [pmin, pmax] =
              std::minmax_element(lambda_by_point.begin(), lambda_by_point.end());
          s["lambda"] = r0->lambda;
          s["lambda_solved"] = r0->lambda_solved;
          s["lambda_dir"] = r0->lambda_dir;
          s["lambda_direction_spread"] = r0->lambda_spread;
          s["lambda_point_spread"] = *pmax - *pmin;
          s["classification"] = r0->classification;
          s["residual_max"] = residual;
          s["trace_residual_max"] = trace;
          s["special_rho"] = r0->special_rho;
          s["half_symmetrized"] = mat_json(r0->half_sym);
          if (r0->lambda_spread > tol.spread)
            warnings.push_back("soliton lambda spread " + fmt(r0->lambda_spread) +
                               " across directions exceeds tolerance");
          if (*pmax - *pmin > tol.spread)
            warnings.push_back("soliton lambda spread " + fmt(*pmax - *pmin) +
                               " across sample points exceeds tolerance");
        } else if (sol.restriction == "fiber" && setup) {
          const std::size_t srep = sgood.front();
          const SubmersionGeometry& sgr = *csgs[srep];
          const PotentialData pd_rep = eval_potential(sgr.src, potential);
          double lambda = 0.0;
          bool solved = false;
          if (lam_fixed) {
            lambda = *lam_fixed;
          } else {
            const FiberSolitonReport probe =
                fiber_soliton(sgr, *od_rep, *fg_rep, pd_rep, sol.rho, 0.0,
                              doc["submersion"]["parallel_distributions"]["vertical_parallel"]
                                  .get<bool>(),
                              tol.oneill, tol.spread, tol.band);
            lambda = probe.lambda_mean - lambda_fiber_correction(*od_rep, sol.rho, 0.0);
            solved = true;
          }
          double residual = 0.0, residual_star = 0.0;
          std::optional<FiberSolitonReport> r0;
          for (std::size_t i : sgood) {
            const SubmersionGeometry& sgi = *csgs[i];
            const ONeillData odi = oneill_tensors(sgi);
            const FiberGeometry fgi = fiber_geometry(sgi);
            const PotentialData pdi = eval_potential(sgi.src, potential);
            const ParallelDistributionCheck pci = parallel_distribution_check(odi, sgi, tol.oneill);
            const FiberSolitonReport r =
                fiber_soliton(sgi, odi, fgi, pdi, sol.rho, lambda, pci.vertical_parallel,
                              tol.oneill, tol.spread, tol.band);
            residual = std::max(residual, r.residual_max);
            residual_star = std::max(residual_star, r.residual_star_max);
            if (!r0) r0 = r;
          }
          const int m = setup->fiber_dim();
          s["lambda"] = lambda;
          s["lambda_solved"] = solved;
          s["capital_lambda"] = r0->capital_lambda;
          s["fiber_constant_dir"] = r0->lambda_dir;
          s["fiber_constant_spread"] = r0->lambda_spread;
          s["classification"] = r0->classification;
          s["residual_max"] = residual;
          s["residual_dual_max"] = residual_star;
          s["vertical_parallel"] = r0->vertical_parallel;
          s["potential_horizontal_norm"] = r0->horizontal_norm;
          const std::vector<std::string> labels = special_rho_labels(sol.rho, m, tol.singular);
          s["special_rho"] = labels;
          for (const std::string& l : labels)
            if (l.find("alternate") != std::string::npos)
              s["note"] = "the conventional Schouten coupling in fiber dimension " +
                          std::to_string(m) + " is rho = 1/(2(n-1)) = " + fmt(1.0 / (2 * (m - 1)));
          if (r0->lambda_spread > tol.spread)
            warnings.push_back("soliton lambda spread " + fmt(r0->lambda_spread) +
                               " across fiber directions exceeds tolerance");
          if (!r0->vertical_parallel)
            warnings.push_back(
                "fiber soliton hypothesis violated: the vertical distribution is not parallel");

          if (sol.potential && sol.potential->kind == PotentialKind::Conformal) {
            const ConformalReport cr = conformal_diagnostic(sgr.src, pd_rep.v, tol.oneill);
            json cj;
            cj["phi"] = cr.phi;
            cj["residual_max"] = cr.residual_max;
            cj["conformal"] = cr.conformal;
            cj["killing"] = cr.conformal && std::abs(cr.phi) <= tol.oneill;
            if (cr.conformal) {
              try {
                const double predicted =
                    einstein_fiber_scalar(m, sol.rho, cr.phi, r0->capital_lambda);
                cj["predicted_fiber_scalar"] = predicted;
                cj["computed_fiber_scalar"] = fg_rep->scalar;
                cj["fiber_scalar_match"] =
                    close(predicted, fg_rep->scalar, tol.identity);
              } catch (const SingularDenominator& e) {
                cj["predicted_fiber_scalar"] = std::string("singular denominator: ") + e.what();
              }
            }
            cj["threshold_classification"] =
                threshold_classify(fg_rep->scalar, sol.rho, m, cr.phi, tol.band);
            s["conformal"] = cj;
          }
          if (sol.potential && sol.potential->kind == PotentialKind::Gradient) {
            const PoissonReport pr =
                poisson_analysis(sgr, *od_rep, *fg_rep, pd_rep, sol.rho, lambda, tol.oneill,
                                 tol.band);
            json pj;
            pj["laplacian_fiber"] = pr.laplacian_fiber;
            pj["laplacian_ambient"] = pr.laplacian_ambient;
            pj["capital_lambda"] = pr.capital_lambda;
            pj["rhs_printed"] = pr.rhs_printed;
            pj["rhs_contracted"] = pr.rhs_contracted;
            pj["residual_printed"] = pr.residual_printed;
            pj["residual_contracted"] = pr.residual_contracted;
            pj["harmonic"] = pr.harmonic;
            pj["harmonic_classification"] = pr.harmonic_classification;
            s["poisson"] = pj;
          }
        } else if (sol.restriction == "base" && setup) {
          const std::size_t srep = sgood.front();
          const SubmersionGeometry& sgr = *csgs[srep];
          double lambda = 0.0;
          bool solved = false;
          if (lam_fixed) {
            lambda = *lam_fixed;
          } else {
            const SolitonPointReport probe =
                soliton_point(*cpgs[rep], potential, sol.rho, std::nullopt, tol.spread, tol.band);
            lambda = probe.lambda;
            solved = true;
          }
          double res_printed = 0.0, res_consistent = 0.0;
          std::optional<BaseSolitonReport> r0;
          for (std::size_t i : sgood) {
            const SubmersionGeometry& sgi = *csgs[i];
            const ONeillData odi = oneill_tensors(sgi);
            const BaseGeometry bgi = base_geometry(sgi);
            const PotentialData pdi = eval_potential(sgi.src, potential);
            const ParallelDistributionCheck pci = parallel_distribution_check(odi, sgi, tol.oneill);
            const BaseSolitonReport r = base_soliton(sgi, odi, bgi, pdi, sol.rho, lambda,
                                                     pci.horizontal_parallel, tol.oneill);
            res_printed = std::max(res_printed, r.residual_printed_max);
            res_consistent = std::max(res_consistent, r.residual_consistent_max);
            if (!r0) r0 = r;
          }
          s["lambda"] = lambda;
          s["lambda_solved"] = solved;
          s["capital_lambda"] = r0->capital_lambda;
          s["residual_printed_max"] = res_printed;
          s["residual_consistent_max"] = res_consistent;
          s["potential_vertical"] = r0->potential_vertical;
          s["potential_horizontal"] = r0->potential_horizontal;
          s["potential_vertical_norm"] = r0->vertical_norm;
          s["potential_horizontal_norm"] = r0->horizontal_norm;
          s["horizontal_parallel"] = r0->horizontal_parallel;
          s["target_einstein"] = einstein_json(r0->target_einstein);
          if (!r0->horizontal_parallel)
            warnings.push_back(
                "base soliton hypothesis violated: the horizontal distribution is not parallel");
          s["note"] =
              "residual_printed uses the published coefficient (2*Lambda - rho*R-hat); "
              "residual_consistent uses the trace-consistent 2*(Lambda - rho*R-hat)";
          (void)sgr;
        }
      } catch (const Error& e) {
        s["skipped"] = e.what();
        warnings.push_back(std::string("soliton analysis skipped: ") + e.what());
      }
      a["soliton"] = s;
    }

    // Claims against the total-space curvature, recorded per convention.
    if (have_claims) {
      json rows = json::array();
      if (claims.contains("scalar")) {
        const double claimed = claims["scalar"].get<double>();
        rows.push_back({{"claim", "scalar"},
                        {"claimed", claimed},
                        {"computed", cd.scalar},
                        {"match", close(claimed, cd.scalar, tol.identity)}});
      }
      if (claims.contains("einstein")) {
        rows.push_back({{"claim", "einstein"},
                        {"claimed", claims["einstein"].get<bool>()},
                        {"computed", cd.einstein.is_einstein},
                        {"match", claims["einstein"].get<bool>() == cd.einstein.is_einstein}});
      }
      if (claims.contains("constant_curvature")) {
        const bool computed = cd.const_curv_residual <= tol.identity;
        rows.push_back({{"claim", "constant_curvature"},
                        {"claimed", claims["constant_curvature"].get<bool>()},
                        {"computed", computed},
                        {"match", claims["constant_curvature"].get<bool>() == computed}});
      }
      if (claims.contains("ricci_diag")) {
        const auto claimed = claims["ricci_diag"].get<std::vector<double>>();
        bool match = claimed.size() == cd.ricci_diag.size();
        for (std::size_t k = 0; match && k < claimed.size(); ++k)
          match = close(claimed[k], cd.ricci_diag[k], tol.identity);
        rows.push_back({{"claim", "ricci_diag"},
                        {"claimed", claimed},
                        {"computed", cd.ricci_diag},
                        {"match", match}});
      }
      if (!rows.empty()) a["curvature_claims"] = rows;
    }

    conv_data.push_back(std::move(cd));
    analyses.push_back(std::move(a));
  }
  doc["analyses"] = analyses;

  // ---- Cross-convention claim findings ----
  if (have_claims) {
    if (claims.contains("scalar")) {
      const double claimed = claims["scalar"].get<double>();
      std::vector<int> matched;
      json computed;
      for (const ConvData& cd : conv_data) {
        computed["convention " + fmt(cd.conv)] = cd.scalar;
        if (close(claimed, cd.scalar, tol.identity)) matched.push_back(cd.conv);
      }
      if (matched.empty())
        add_finding("claimed scalar curvature is not reproduced under any scanned convention",
                    claimed, computed);
      else if (matched.size() < conv_data.size())
        add_finding("claimed scalar curvature matches convention " + fmt(matched.front()) +
                        " only; the sign convention differs",
                    claimed, computed);
    }
    if (claims.contains("einstein") && claims["einstein"].get<bool>()) {
      bool any = false;
      double spread = 0.0;
      for (const ConvData& cd : conv_data) {
        any = any || cd.einstein.is_einstein;
        spread = std::max(spread, cd.einstein.diag_spread);
      }
      if (!any)
        add_finding("claimed Einstein structure has a non-proportional Ricci tensor "
                    "(diagonal spread " + fmt(spread) + ")",
                    true, spread);
    }
    if (claims.contains("constant_curvature") && claims["constant_curvature"].get<bool>()) {
      double best = std::numeric_limits<double>::infinity();
      for (const ConvData& cd : conv_data) best = std::min(best, cd.const_curv_residual);
      if (best > tol.identity)
        add_finding("claimed constant-curvature structure fails the constant-curvature fit "
                    "(best residual " + fmt(best) + ")",
                    true, best);
    }
    if (claims.contains("ricci_diag")) {
      const auto claimed = claims["ricci_diag"].get<std::vector<double>>();
      bool any = false;
      for (const ConvData& cd : conv_data) {
        bool match = claimed.size() == cd.ricci_diag.size();
        for (std::size_t k = 0; match && k < claimed.size(); ++k)
          match = close(claimed[k], cd.ricci_diag[k], tol.identity);
        any = any || match;
      }
      if (!any)
        add_finding("claimed Ricci diagonal is not reproduced under any scanned convention",
                    claimed, conv_data.front().ricci_diag);
    }
  }

  // ---- Claims-driven soliton arithmetic (published values injected) ----
  if (have_claims && claims.contains("fiber_ricci_diag") && claims.contains("soliton_cases")) {
    const auto diag = claims["fiber_ricci_diag"].get<std::vector<double>>();
    const int m = static_cast<int>(diag.size());
    Mat<double> ric(m, m, 0.0);
    double trace = 0.0;
    for (int i = 0; i < m; ++i) {
      ric(i, i) = diag[static_cast<std::size_t>(i)];
      trace += diag[static_cast<std::size_t>(i)];
    }
    const double scalar = claims.contains("fiber_scalar")
                              ? claims["fiber_scalar"].get<double>()
                              : trace;
    json rows = json::array();
    for (const json& c : claims["soliton_cases"]) {
      const double rho = c["rho"].get<double>();
      const SolitonPointReport r =
          soliton_from_claims(ric, scalar, rho, std::nullopt, tol.spread, tol.band);
      json row;
      row["rho"] = rho;
      row["lambda"] = r.lambda;
      row["lambda_dir"] = r.lambda_dir;
      row["lambda_spread"] = r.lambda_spread;
      row["classification"] = r.classification;
      row["special_rho"] = r.special_rho;
      for (const std::string& l : r.special_rho)
        if (l.find("alternate") != std::string::npos)
          row["note"] = "the conventional Schouten coupling in dimension " + std::to_string(m) +
                        " is rho = 1/(2(n-1)) = " + fmt(1.0 / (2 * (m - 1)));
      if (c.contains("lambda")) {
        const double claimed = c["lambda"].get<double>();
        row["claimed_lambda"] = claimed;
        row["lambda_match"] = close(claimed, r.lambda, 1e-9);
        if (!close(claimed, r.lambda, 1e-9))
          add_finding("claimed soliton constant differs from the value solved from the claimed "
                      "Ricci data at rho = " + fmt(rho),
                      claimed, r.lambda);
      }
      if (c.contains("classification")) {
        const std::string claimed = c["classification"].get<std::string>();
        row["claimed_classification"] = claimed;
        row["classification_match"] = claimed == r.classification;
        if (claimed != r.classification)
          add_finding("claimed soliton classification differs at rho = " + fmt(rho), claimed,
                      r.classification);
      }
      if (c.contains("label")) {
        const std::string label = c["label"].get<std::string>();
        bool matched = false;
        for (const std::string& l : r.special_rho)
          if (l.find(label) != std::string::npos) matched = true;
        row["claimed_label"] = label;
        row["label_match"] = matched;
      }
      if (r.lambda_spread > tol.spread)
        warnings.push_back("soliton lambda spread " + fmt(r.lambda_spread) +
                           " across directions in the claims-data solve at rho = " + fmt(rho) +
                           " (the claimed Ricci diagonal is inconsistent in one direction)");
      rows.push_back(std::move(row));
    }
    json sec;
    sec["source"] = "claimed Ricci data on an orthonormal fiber frame, zero potential";
    sec["ricci_diag"] = diag;
    sec["scalar"] = scalar;
    sec["cases"] = rows;
    doc["soliton_arithmetic"] = sec;
  }

  if (have_claims) doc["claims_input"] = claims;
  if (!findings.empty()) doc["paper_discrepancy_findings"] = findings;
  if (!point_errors.empty()) doc["point_errors"] = point_errors;
  doc["warnings"] = warnings;

  Report report;
  report.json_text = doc.dump(2);
  return report;
}

}  // namespace statsub
