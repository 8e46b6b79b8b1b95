#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "statsub/builtins.hpp"
#include "statsub/manifest.hpp"
#include "statsub/solitons.hpp"

using namespace statsub;

namespace {

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

}  // namespace

TEST_CASE("trace bookkeeping closes on random structures") {
  std::mt19937_64 rng(505);
  for (int n = 0; n < 6; ++n) {
    const int dim = 2 + n % 3;
    StatisticalStructure s = oracles::random_statistical_structure(rng, dim);
    std::vector<std::string> comps;
    for (int k = 0; k < dim; ++k) comps.push_back(oracles::random_expr(rng, s.chart.coordinates, 1));
    const Potential pot = vector_potential(comps, s.chart.coordinates);
    const double rho = oracles::uniform(rng, -0.5, 0.8);
    const double lam = oracles::uniform(rng, -2.0, 2.0);
    for (int p = 0; p < 5; ++p) {
      const PointGeometry pg = point_geometry(s, oracles::random_point(rng, dim));
      const SolitonPointReport rep = soliton_point(pg, pot, rho, lam);
      CHECK(rep.trace_residual < 1e-8);
      CHECK_FALSE(rep.lambda_solved);
      CHECK(rep.lambda == lam);
    }
  }
}

TEST_CASE("gradient and metric-gradient vector potentials agree on Levi-Civita") {
  // On a Levi-Civita structure the nabla-Hessian of psi equals half the Lie
  // derivative along grad psi, so both flow tensors must coincide.
  std::mt19937_64 rng(606);
  Chart chart = oracles::make_chart(2);
  const auto& c = chart.coordinates;
  std::map<std::pair<int, int>, Expression> m;
  m[{0, 0}] = Expression::parse("1 + 0.3*x1^2", c);
  m[{1, 1}] = Expression::parse("1 + 0.2*x2^2", c);
  StatisticalStructure s{chart, MetricField::from_entries(chart, m),
                         ConnectionField::levi_civita(), +1};

  const std::string psi = "sin(x1)*x2 + x1^2";
  const Potential grad = gradient_potential(psi, c);
  // grad psi for the diagonal metric, written out componentwise.
  const Potential vec = vector_potential(
      {"(cos(x1)*x2 + 2*x1)/(1 + 0.3*x1^2)", "sin(x1)/(1 + 0.2*x2^2)"}, c);

  for (int p = 0; p < 10; ++p) {
    const PointGeometry pg = point_geometry(s, oracles::random_point(rng, 2));
    const SolitonPointReport rg = soliton_point(pg, grad, 0.3, 0.7);
    const SolitonPointReport rv = soliton_point(pg, vec, 0.3, 0.7);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(rg.half_sym(i, j) == doctest::Approx(rv.half_sym(i, j)).epsilon(1e-8));
    CHECK(rg.residual_max == doctest::Approx(rv.residual_max).epsilon(1e-7));
  }
}

TEST_CASE("conformal diagnostic recovers the factor") {
  Chart chart = oracles::make_chart(2);
  StatisticalStructure s{chart, MetricField::identity(chart), ConnectionField::levi_civita(), +1};
  const PointGeometry pg = point_geometry(s, std::vector<double>{0.4, -0.7});
  const auto& c = chart.coordinates;
  auto field = [&](const std::vector<std::string>& comps) {
    JVec v;
    for (const auto& t : comps) v.push_back(Expression::parse(t, c).eval_jet(pg.x));
    return v;
  };

  const ConformalReport radial = conformal_diagnostic(pg, field({"x1", "x2"}));
  CHECK(radial.conformal);
  CHECK(radial.phi == doctest::Approx(1.0));
  CHECK(radial.residual_max < 1e-12);

  const ConformalReport rot = conformal_diagnostic(pg, field({"-x2", "x1"}));
  CHECK(rot.conformal);  // Killing: conformal with factor zero
  CHECK(rot.phi == doctest::Approx(0.0));

  const ConformalReport shear = conformal_diagnostic(pg, field({"x2", "0"}));
  CHECK_FALSE(shear.conformal);
}

TEST_CASE("constant corrections vanish without T, A and N") {
  const SubmersionSetup setup = builtin_example("orthogonal-projection").submersion_setup();
  const SubmersionGeometry sg = submersion_geometry(setup, std::vector<double>{0.1, 0.2, 0.3, 0.4});
  const ONeillData od = oneill_tensors(sg);
  for (double rho : {0.0, 0.3, -0.7})
    for (double lam : {0.0, 1.5, -2.0}) {
      CHECK(lambda_fiber_correction(od, rho, lam) == doctest::Approx(lam).epsilon(1e-14));
      CHECK(lambda_base_correction(od, rho, lam) == doctest::Approx(lam).epsilon(1e-14));
    }

  const FiberGeometry fg = fiber_geometry(sg);
  PotentialData none;
  none.v = JVec(4, Jet2::constant(0.0, 4));
  const FiberSolitonReport rep = fiber_soliton(sg, od, fg, none, 0.3, 0.0, true);
  CHECK(rep.capital_lambda == doctest::Approx(0.0));
  CHECK(rep.residual_max < 1e-12);
  CHECK(rep.residual_star_max < 1e-12);
  CHECK(rep.classification == "steady");
  CHECK(rep.lambda_spread < 1e-12);
}

TEST_CASE("fiber restriction rejects horizontal potentials") {
  const SubmersionSetup setup = builtin_example("orthogonal-projection").submersion_setup();
  const SubmersionGeometry sg = submersion_geometry(setup, std::vector<double>{0.1, 0.2, 0.3, 0.4});
  const ONeillData od = oneill_tensors(sg);
  const FiberGeometry fg = fiber_geometry(sg);
  const auto& c = setup.source.chart.coordinates;

  const PotentialData horiz =
      eval_potential(sg.src, vector_potential({"1", "0", "0", "0"}, c));
  CHECK_THROWS_AS((void)fiber_soliton(sg, od, fg, horiz, 0.3, 0.0, true), NotVertical);

  const PotentialData hgrad = eval_potential(sg.src, gradient_potential("x1", c));
  CHECK_THROWS_AS((void)fiber_soliton(sg, od, fg, hgrad, 0.3, 0.0, true), NotVerticalGradient);
  CHECK_THROWS_AS((void)poisson_analysis(sg, od, fg, hgrad, 0.3, 0.0), NotVerticalGradient);
}

TEST_CASE("Einstein fiber scalar closed form and singular guard") {
  const double rbar = einstein_fiber_scalar(3, 0.5, 1.0, 2.0);
  CHECK(rbar == doctest::Approx(-36.0).epsilon(1e-12));
  // Back-substitution: Rbar (1 - m rho / 2) = -m (phi + Lambda).
  CHECK(rbar * (1.0 - 3 * 0.5 / 2.0) == doctest::Approx(-9.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)einstein_fiber_scalar(4, 0.5, 1.0, 2.0), SingularDenominator);
  CHECK_THROWS_AS((void)einstein_fiber_scalar(2, 1.0, 0.0, 0.0), SingularDenominator);
}

TEST_CASE("threshold and harmonic classifications") {
  // rbar (rho/2 - 1/m) - phi with rbar = 6, rho = 1, m = 3 gives 1 - phi.
  CHECK(threshold_classify(6.0, 1.0, 3, 0.5) == "expanding");
  CHECK(threshold_classify(6.0, 1.0, 3, 1.0) == "steady");
  CHECK(threshold_classify(6.0, 1.0, 3, 1.5) == "shrinking");

  CHECK(harmonic_classify(1.1, 2) == "expanding");
  CHECK(harmonic_classify(1.0, 2) == "steady");
  CHECK(harmonic_classify(0.9, 2) == "shrinking");
}

TEST_CASE("Poisson analysis for a harmonic vertical gradient") {
  const SubmersionSetup setup = builtin_example("orthogonal-projection").submersion_setup();
  const SubmersionGeometry sg =
      submersion_geometry(setup, std::vector<double>{0.3, -0.1, 0.7, 0.2});
  const ONeillData od = oneill_tensors(sg);
  const FiberGeometry fg = fiber_geometry(sg);
  const auto& c = setup.source.chart.coordinates;
  const PotentialData pd = eval_potential(sg.src, gradient_potential("x3", c));

  for (double rho : {0.9, 1.0, 1.1}) {
    const PoissonReport rep = poisson_analysis(sg, od, fg, pd, rho, 0.0);
    CHECK(rep.harmonic);
    CHECK(std::abs(rep.laplacian_fiber) < 1e-12);
    CHECK(std::abs(rep.laplacian_ambient) < 1e-12);
    CHECK(rep.capital_lambda == doctest::Approx(0.0));
    CHECK(std::abs(rep.rhs_printed) < 1e-12);  // flat fibers, Lambda = 0
    CHECK(rep.harmonic_classification == harmonic_classify(rho, 2));
  }
  CHECK(poisson_analysis(sg, od, fg, pd, 0.9, 0.0).harmonic_classification == "shrinking");
  CHECK(poisson_analysis(sg, od, fg, pd, 1.0, 0.0).harmonic_classification == "steady");
  CHECK(poisson_analysis(sg, od, fg, pd, 1.1, 0.0).harmonic_classification == "expanding");
}

TEST_CASE("claims-data solve reproduces the published table") {
  Mat<double> ric(3, 3, 0.0);
  ric(0, 0) = ric(1, 1) = 2.0;
  ric(2, 2) = 1.0;
  const double scalar = 5.0;

  struct Case {
    double rho, lambda;
    std::string cls;
  };
  const std::vector<Case> cases = {{0.5, 0.5, "expanding"},
                                   {0.2, -1.0, "shrinking"},
                                   {0.0, -2.0, "shrinking"},
                                   {0.4, 0.0, "steady"}};
  for (const auto& c : cases) {
    const SolitonPointReport rep = soliton_from_claims(ric, scalar, c.rho, std::nullopt);
    CHECK(rep.lambda == doctest::Approx(c.lambda).epsilon(1e-12));
    CHECK(rep.classification == c.cls);
    CHECK(rep.lambda_spread == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(rep.lambda_dir.size() == 3);
    CHECK(rep.lambda_dir[0] == doctest::Approx(5 * c.rho - 2).epsilon(1e-12));
    CHECK(rep.lambda_dir[2] == doctest::Approx(5 * c.rho - 1).epsilon(1e-12));
    CHECK_FALSE(rep.lambda_consistent);  // one direction disagrees by 1
  }

  // Named couplings.
  auto labels = special_rho_labels(0.2, 3);
  bool alt = false;
  for (const auto& l : labels)
    if (l.find("alternate printed value") != std::string::npos) alt = true;
  CHECK(alt);
  labels = special_rho_labels(0.5, 3);
  REQUIRE_FALSE(labels.empty());
  CHECK(labels.front().find("Einstein") != std::string::npos);
  labels = special_rho_labels(0.0, 3);
  REQUIRE_FALSE(labels.empty());
  CHECK(labels.back().find("Ricci soliton") != std::string::npos);
}

TEST_CASE("warped fiber soliton: solved constant makes the residual vanish") {
  // Fibers of the warped product are flat tori scaled by f, so with V = 0 the
  // fiber equation needs Lambda = rho * Rbar - Rbar-ric(E,E) = 0 identically.
  const SubmersionSetup setup = builtin_example("warped-product").submersion_setup();
  const SubmersionGeometry sg = submersion_geometry(setup, std::vector<double>{0.5, 0.0, 0.0});
  const ONeillData od = oneill_tensors(sg);
  const FiberGeometry fg = fiber_geometry(sg);
  PotentialData none;
  none.v = JVec(3, Jet2::constant(0.0, 3));

  // Fibers are intrinsically flat: Rbar-ric = 0.
  CHECK(std::abs(fg.scalar) < 1e-10);
  const double rho = 0.3;
  // Solve for the total-space lambda that yields fiber constant Lambda = 0.
  const double lambda = 0.0 - (lambda_fiber_correction(od, rho, 0.0) - 0.0);
  const FiberSolitonReport rep = fiber_soliton(sg, od, fg, none, rho, lambda, false);
  CHECK(rep.capital_lambda == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(rep.residual_max < 1e-9);
  CHECK(rep.residual_star_max < 1e-9);
}
