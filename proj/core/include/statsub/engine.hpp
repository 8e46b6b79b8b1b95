#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "statsub/manifest.hpp"
#include "statsub/report.hpp"

namespace statsub {

// Command-line overrides applied on top of the manifest before a run.
struct RunOptions {
  std::optional<std::vector<int>> conventions;  // curvature sign conventions to scan
  std::optional<int> random_count;              // number of random sample points
  std::optional<std::uint64_t> seed;
  double tolerance_scale = 1.0;  // multiplies every tolerance
};

// Runs the full analysis pipeline: structure checks, curvature, then (when a
// submersion is present) the frame split, fundamental tensors, fiber/base
// curvature, identity and inequality suites, and finally the soliton
// analyses.  Stages record their residuals even when earlier stages raised
// warnings.  Only hard numeric failures at every sample point abort; every
// other problem becomes a warning inside the report.
Report run(const Manifest& manifest, const RunOptions& options = {});

}  // namespace statsub
