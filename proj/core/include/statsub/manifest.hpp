#pragma once

#include <optional>
#include <string>
#include <vector>

#include "statsub/solitons.hpp"
#include "statsub/structure.hpp"
#include "statsub/submersion.hpp"

namespace statsub {

// Named tolerances used across the analyses, with their defaults.  scale()
// multiplies every entry uniformly (the --tol-scale flag).
struct Tolerances {
  double conjugation = 1e-9;
  double involution = 1e-12;
  double duality = 1e-8;
  double statistical = 1e-8;
  double spd = 1e-10;
  double identity = 1e-6;
  double oneill = 1e-8;
  double einstein = 1e-8;
  double spread = 1e-6;
  double band = 1e-10;      // soliton classification band
  double singular = 1e-12;  // singular-denominator guard
  double angle = 1e-9;      // subspace angle
  double isometry = 1e-10;  // horizontal isometry residual

  void scale(double k);
};

struct SolitonSpec {
  double rho = 0.0;
  bool solve_lambda = true;
  double lambda = 0.0;                  // used when !solve_lambda
  std::optional<Potential> potential;   // nullopt represents "none" (V = 0)
  std::string restriction = "total";    // total | fiber | base
};

struct EvaluationSpec {
  std::vector<std::vector<double>> points;  // explicit sample points
  int random_count = 0;
  std::uint64_t seed = 1729;
  std::vector<std::pair<double, double>> box;  // per-coordinate bounds
};

struct Manifest {
  std::string name;  // optional label (builtins set it)
  StatisticalStructure source;
  std::optional<StatisticalStructure> target;
  std::optional<SubmersionMap> map;
  std::vector<int> conventions = {+1};  // one entry, or {+1,-1} for "both"
  std::optional<SolitonSpec> soliton;
  EvaluationSpec evaluation;
  Tolerances tolerances;
  std::string claims_text;  // JSON object with published values, "" when absent

  SubmersionSetup submersion_setup() const;  // requires target and map
};

// Parses and validates a manifest.  Throws ParseError for malformed JSON and
// ValidationError for structural problems; expression strings are parsed
// eagerly so syntax errors surface at load time.
Manifest load_manifest_text(const std::string& text);
Manifest load_manifest_file(const std::string& path);

}  // namespace statsub
