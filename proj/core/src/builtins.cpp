#include "statsub/builtins.hpp"

#include <array>
#include <utility>

#include "statsub/errors.hpp"

namespace statsub {

namespace {

// A six-dimensional flat chart whose published connection table has nonzero
// torsion and a broken Codazzi condition; the claims block records the
// published assertions so the report can diff them against computed values.
const std::string kExample47 = R"json({
  "name": "paper-example-4-7",
  "source": {
    "dimension": 6,
    "connection": {
      "G_6_1_1": "1", "G_6_2_2": "1", "G_6_3_3": "1", "G_6_4_4": "1", "G_6_5_5": "1",
      "G_1_1_6": "1", "G_2_2_6": "1", "G_3_3_6": "1", "G_4_4_6": "1", "G_5_5_6": "1"
    },
    "curvature_convention": "both"
  },
  "evaluation": { "points": [[0, 0, 0, 0, 0, 0]] },
  "claims": {
    "statistical": true,
    "constant_curvature": true,
    "scalar": -20,
    "einstein": true
  }
})json";

// Same chart with the connection completed symmetrically, which removes the
// torsion and restores the Codazzi condition.
const std::string kExample47Repaired = R"json({
  "name": "paper-example-4-7-repaired",
  "source": {
    "dimension": 6,
    "connection": {
      "G_6_1_1": "1", "G_6_2_2": "1", "G_6_3_3": "1", "G_6_4_4": "1", "G_6_5_5": "1",
      "G_1_1_6": "1", "G_2_2_6": "1", "G_3_3_6": "1", "G_4_4_6": "1", "G_5_5_6": "1",
      "G_1_6_1": "1", "G_2_6_2": "1", "G_3_6_3": "1", "G_4_6_4": "1", "G_5_6_5": "1"
    },
    "curvature_convention": "both"
  },
  "evaluation": { "points": [[0, 0, 0, 0, 0, 0]] },
  "claims": { "statistical": true }
})json";

// The submersion built on the structure above: pairwise averaging onto a flat
// three-dimensional target.  The claims block carries the published fiber
// curvature, Ricci diagonal, scalar, and the three coupling-constant cases of
// the published soliton discussion (lambda = 5*rho - 2).
const std::string kExample72 = R"json({
  "name": "paper-example-7-2",
  "source": {
    "dimension": 6,
    "connection": {
      "G_6_1_1": "1", "G_6_2_2": "1", "G_6_3_3": "1", "G_6_4_4": "1", "G_6_5_5": "1",
      "G_1_1_6": "1", "G_2_2_6": "1", "G_3_3_6": "1", "G_4_4_6": "1", "G_5_5_6": "1"
    },
    "curvature_convention": 1
  },
  "target": { "dimension": 3, "coordinates": ["y1", "y2", "y3"] },
  "submersion": {
    "map": ["(x1+x2)/sqrt(2)", "(x3+x4)/sqrt(2)", "(x5+x6)/sqrt(2)"]
  },
  "soliton": { "rho": 0.2, "lambda": "solve", "potential": "none", "restriction": "fiber" },
  "evaluation": { "random": { "count": 10, "seed": 1729 } },
  "claims": {
    "jacobian_rank": 3,
    "fiber_curvature_samples": [
      { "args": [1, 2, 2, 1], "value": 2 },
      { "args": [1, 2, 1, 2], "value": -2 }
    ],
    "fiber_ricci_diag": [2, 2, 1],
    "fiber_scalar": 5,
    "soliton_cases": [
      { "rho": 0.5, "lambda": 0.5, "classification": "expanding", "label": "Einstein" },
      { "rho": 0.2, "lambda": -1, "classification": "shrinking", "label": "Schouten" },
      { "rho": 0, "lambda": -2, "classification": "shrinking", "label": "Ricci" }
    ]
  }
})json";

// Flat orthogonal projection: both fundamental tensors vanish, every
// inequality is an equality, and the solved fiber soliton has
// capital-Lambda equal to lambda.
const std::string kOrthogonalProjection = R"json({
  "name": "orthogonal-projection",
  "source": { "dimension": 4 },
  "target": { "dimension": 2, "coordinates": ["y1", "y2"] },
  "submersion": { "map": ["x1", "x2"] },
  "soliton": { "rho": 0.3, "lambda": "solve", "potential": "none", "restriction": "fiber" },
  "evaluation": {
    "points": [[0, 0, 0, 0]],
    "random": { "count": 20, "seed": 1729 }
  }
})json";

// Warped product over a line: the fibers are scaled by f(x1) = 1 + x1^2/4, so
// they are not totally geodesic (T != 0) while the horizontal distribution is
// integrable (A = 0).
const std::string kWarpedProduct = R"json({
  "name": "warped-product",
  "source": {
    "dimension": 3,
    "metric": {
      "g_22": "(1 + x1^2/4)^2",
      "g_33": "(1 + x1^2/4)^2"
    }
  },
  "target": { "dimension": 1, "coordinates": ["t"] },
  "submersion": { "map": ["x1"] },
  "evaluation": {
    "points": [[0.5, 0, 0]],
    "random": { "count": 20, "seed": 1729 }
  }
})json";

const std::array<std::pair<const char*, const std::string*>, 5> kBuiltins = {{
    {"paper-example-4-7", &kExample47},
    {"paper-example-4-7-repaired", &kExample47Repaired},
    {"paper-example-7-2", &kExample72},
    {"orthogonal-projection", &kOrthogonalProjection},
    {"warped-product", &kWarpedProduct},
}};

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : kBuiltins) {
    (void)text;
    names.emplace_back(name);
  }
  return names;
}

const std::string& builtin_manifest_text(const std::string& name) {
  for (const auto& [key, text] : kBuiltins)
    if (name == key) return *text;
  throw UnknownExample(name);
}

Manifest builtin_example(const std::string& name) {
  return load_manifest_text(builtin_manifest_text(name));
}

}  // namespace statsub
