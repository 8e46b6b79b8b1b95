#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "statsub/builtins.hpp"
#include "statsub/manifest.hpp"
#include "statsub/submersion.hpp"

using namespace statsub;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::vector<Vec<double>> value_span(const std::vector<JVec>& frame) {
  std::vector<Vec<double>> out;
  for (const auto& v : frame) out.push_back(values_of(v));
  return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("orthogonal projection: totally geodesic, integrable, statistical") {
  const Manifest man = builtin_example("orthogonal-projection");
  const SubmersionSetup setup = man.submersion_setup();
  std::mt19937_64 rng(31);
  for (int p = 0; p < 10; ++p) {
    const auto x = oracles::random_point(rng, 4);
    const SubmersionGeometry sg = submersion_geometry(setup, x);
    CHECK(sg.split.rank == 2);

    const SubmersionCheck chk = check_submersion(sg);
    CHECK(chk.isometry_max < 1e-10);
    CHECK(chk.statistical_max < 1e-10);
    CHECK(chk.riemannian);
    CHECK(chk.statistical);

    const ONeillData od = oneill_tensors(sg);
    CHECK(od.norm2_T_full < 1e-20);
    CHECK(od.norm2_A < 1e-20);
    CHECK(od.e3_max < 1e-12);
    CHECK(od.e4_max < 1e-12);
    CHECK(od.ss3_max < 1e-12);
    CHECK(od.lemma_a_max < 1e-12);

    const ParallelDistributionCheck pd = parallel_distribution_check(od, sg);
    CHECK(pd.vertical_parallel);
    CHECK(pd.horizontal_parallel);
    CHECK(pd.vertical_parallel_star);
    CHECK(pd.horizontal_parallel_star);
  }
}

TEST_CASE("averaging submersion: frames, rank, isometry, published spans") {
  const Manifest man = builtin_example("paper-example-7-2");
  const SubmersionSetup setup = man.submersion_setup();
  std::mt19937_64 rng(57);
  for (int p = 0; p < 10; ++p) {
    const auto x = oracles::random_point(rng, 6);
    const SubmersionGeometry sg = submersion_geometry(setup, x);
    CHECK(sg.split.rank == 3);
    CHECK(sg.split.m == 3);
    CHECK(sg.split.n == 3);

    CHECK(max_principal_angle(value_span(sg.split.vertical), oracles::published_vertical_span()) <
          1e-9);
    CHECK(max_principal_angle(value_span(sg.split.horizontal), oracles::published_horizontal_span()) <
          1e-9);

    const SubmersionCheck chk = check_submersion(sg);
    CHECK(chk.isometry_max < 1e-10);
    CHECK(chk.riemannian);
    // The printed connection does not project: the basic-lift derivative
    // pushes forward to 1/sqrt(2) against a flat target connection.
    CHECK(chk.statistical_max == doctest::Approx(kInvSqrt2).epsilon(1e-9));
    CHECK_FALSE(chk.statistical);
  }
}

TEST_CASE("averaging submersion: pinned O'Neill blocks") {
  const Manifest man = builtin_example("paper-example-7-2");
  const SubmersionSetup setup = man.submersion_setup();
  const SubmersionGeometry sg =
      submersion_geometry(setup, std::vector<double>{0.1, -0.2, 0.3, 0.05, -0.4, 0.25});
  const ONeillData od = oneill_tensors(sg);

  // T_{E_1}E_1 = H_3/sqrt(2) = (0,0,0,0,1/2,1/2); T_{E_3}E_3 = 0.
  CHECK(max_abs_diff(values_of(od.T_vv[0][0]), {0, 0, 0, 0, 0.5, 0.5}) < 1e-12);
  CHECK(max_abs_diff(values_of(od.T_vv[1][1]), {0, 0, 0, 0, 0.5, 0.5}) < 1e-12);
  CHECK(max_abs_diff(values_of(od.T_vv[2][2]), {0, 0, 0, 0, 0, 0}) < 1e-12);

  // N = sqrt(2) H_3 = (0,0,0,0,1,1); the dual connection gives N* = -N.
  CHECK(max_abs_diff(values_of(od.N), {0, 0, 0, 0, 1, 1}) < 1e-12);
  CHECK(max_abs_diff(values_of(od.Ns), {0, 0, 0, 0, -1, -1}) < 1e-12);

  // A_{X_1}X_1 = V_3/sqrt(2): |A| is 1/sqrt(2) against a zero bracket, which
  // is exactly the alternation residual.
  CHECK(od.e4_max == doctest::Approx(kInvSqrt2).epsilon(1e-9));
  CHECK(od.e3_max < 1e-12);
  CHECK(od.ss3_max < 1e-12);
  CHECK(od.lemma_a_max < 1e-12);

  const ParallelDistributionCheck pd = parallel_distribution_check(od, sg);
  CHECK_FALSE(pd.vertical_parallel);
  CHECK_FALSE(pd.horizontal_parallel);

  const FiberGeometry fg = fiber_geometry(sg);
  CHECK(fg.ric(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fg.ric(1, 1) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fg.ric(2, 2) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(fg.ric(0, 1)) < 1e-10);
  CHECK(fg.scalar == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(fg.rie4(0, 1, 1, 0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(fg.duality_max < 1e-8);

  const BaseGeometry bg = base_geometry(sg);
  CHECK(std::abs(bg.scalar) < 1e-10);
}

TEST_CASE("warped family: closed-form O'Neill tensors") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 3; ++trial) {
    const double a = oracles::uniform(rng, 0.1, 0.5);
    const Manifest man = load_manifest_text(oracles::warped_manifest_text(2, a, 0, 1));
    const SubmersionSetup setup = man.submersion_setup();
    for (int p = 0; p < 10; ++p) {
      const auto x = oracles::random_point(rng, 3);
      const SubmersionGeometry sg = submersion_geometry(setup, x);
      const ONeillData od = oneill_tensors(sg);
      const double r = oracles::warped_ratio(a, x[0]);

      CHECK(od.norm2_A < 1e-18);
      CHECK(od.norm2_T_vv == doctest::Approx(2 * r * r).epsilon(1e-9));
      CHECK(max_abs_diff(values_of(od.N), {-2 * r, 0, 0}) < 1e-9);
      // Levi-Civita is self-dual, so the starred data coincides.
      CHECK(od.norm2_Ts_vv == doctest::Approx(od.norm2_T_vv).epsilon(1e-12));
      CHECK(od.pair_T_Ts_vv == doctest::Approx(od.norm2_T_vv).epsilon(1e-12));
      CHECK(od.e3_max < 1e-9);
      CHECK(od.e4_max < 1e-12);

      const SubmersionCheck chk = check_submersion(sg);
      CHECK(chk.riemannian);
      CHECK(chk.statistical);
    }
  }
}

TEST_CASE("rank-deficient differential raises") {
  const std::string text = R"({
    "source": { "dimension": 2 },
    "target": { "dimension": 1 },
    "submersion": { "map": ["x1^2"] },
    "evaluation": { "points": [[0.0, 0.0]] }
  })";
  const Manifest man = load_manifest_text(text);
  const SubmersionSetup setup = man.submersion_setup();
  CHECK_THROWS_AS((void)submersion_geometry(setup, std::vector<double>{0.0, 0.0}), RankDeficient);
  // Away from the bad point the split exists.
  const SubmersionGeometry ok = submersion_geometry(setup, std::vector<double>{1.0, 0.0});
  CHECK(ok.split.rank == 1);
}
