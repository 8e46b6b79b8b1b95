#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "statsub/builtins.hpp"
#include "statsub/engine.hpp"
#include "statsub/errors.hpp"
#include "statsub/manifest.hpp"
#include "statsub/report.hpp"

namespace {

struct CliFlags {
  std::string format = "md";
  int points = -1;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double tol_scale = 1.0;
  std::string convention;
};

void add_run_flags(CLI::App* cmd, CliFlags& flags) {
  cmd->add_option("--format", flags.format, "report format")
      ->check(CLI::IsMember({"json", "md"}));
  cmd->add_option("--points", flags.points, "number of random sample points");
  cmd->add_option("--seed", flags.seed, "random sampling seed");
  cmd->add_option("--tol-scale", flags.tol_scale, "multiplies every tolerance");
  cmd->add_option("--convention", flags.convention,
                  "curvature sign convention: +1, -1, or both (use --convention=-1)");
}

statsub::RunOptions build_options(const CLI::App* sub, CliFlags& flags) {
  statsub::RunOptions opts;
  if (flags.points >= 0) opts.random_count = flags.points;
  if (sub->count("--seed") > 0) opts.seed = flags.seed;
  opts.tolerance_scale = flags.tol_scale;
  if (!flags.convention.empty()) {
    if (flags.convention == "both")
      opts.conventions = std::vector<int>{+1, -1};
    else if (flags.convention == "+1" || flags.convention == "1")
      opts.conventions = std::vector<int>{+1};
    else if (flags.convention == "-1")
      opts.conventions = std::vector<int>{-1};
    else
      throw statsub::ValidationError("--convention must be +1, -1, or both");
  }
  return opts;
}

void print_report(const statsub::Report& report, const std::string& format) {
  const auto fmt = format == "json" ? statsub::ReportFormat::Json : statsub::ReportFormat::Markdown;
  std::cout << statsub::render_report(report, fmt) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"statistical manifold, submersion, and soliton analysis"};
  app.require_subcommand(1);
  CliFlags flags;
  std::string manifest_path, example_name;
  bool emit_manifest = false;

  CLI::App* check = app.add_subcommand("check", "validate a manifest and exit");
  check->add_option("manifest", manifest_path, "path to a manifest JSON file")->required();

  CLI::App* run_cmd = app.add_subcommand("run", "run the full analysis on a manifest");
  run_cmd->add_option("manifest", manifest_path, "path to a manifest JSON file")->required();
  add_run_flags(run_cmd, flags);

  CLI::App* example = app.add_subcommand("example", "run one of the embedded examples");
  example->add_option("name", example_name, "embedded example name")->required();
  example->add_flag("--emit-manifest", emit_manifest, "print the manifest JSON instead of running");
  add_run_flags(example, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the usage message; 0 for --help
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) {
      const statsub::Manifest man = statsub::load_manifest_file(manifest_path);
      std::cout << "ok: " << (man.name.empty() ? manifest_path : man.name) << " (dimension "
                << man.source.dimension() << (man.map ? ", with submersion" : "")
                << (man.soliton ? ", with soliton" : "") << ")\n";
      return 0;
    }
    if (run_cmd->parsed()) {
      const statsub::Manifest man = statsub::load_manifest_file(manifest_path);
      print_report(statsub::run(man, build_options(run_cmd, flags)), flags.format);
      return 0;
    }
    if (example->parsed()) {
      if (emit_manifest) {
        std::cout << statsub::builtin_manifest_text(example_name) << '\n';
        return 0;
      }
      const statsub::Manifest man = statsub::builtin_example(example_name);
      print_report(statsub::run(man, build_options(example, flags)), flags.format);
      return 0;
    }
  } catch (const statsub::ParseError& e) {
    std::cerr << "manifest error: " << e.what() << '\n';
    return 2;
  } catch (const statsub::ValidationError& e) {
    std::cerr << "manifest error: " << e.what() << '\n';
    return 2;
  } catch (const statsub::UnknownExample& e) {
    std::cerr << "manifest error: " << e.what() << '\n';
    return 2;
  } catch (const statsub::Error& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
