#pragma once

#include <string>
#include <vector>

#include "statsub/manifest.hpp"

namespace statsub {

// Names of the embedded example manifests, in a stable order.
std::vector<std::string> builtin_names();

// Raw manifest JSON for one embedded example; throws UnknownExample for
// anything not in builtin_names().
const std::string& builtin_manifest_text(const std::string& name);

// Parsed form of the same manifest.
Manifest builtin_example(const std::string& name);

}  // namespace statsub
