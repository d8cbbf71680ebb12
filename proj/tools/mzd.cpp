// mzd: command-line front end for the interferometer duality model.
//
//   mzd <command> [--config FILE] [--set key=value]... [--seed N] [--out FILE]
//
// Every command writes one CSV table (with `# key: value` metadata lines) to
// --out, to the config's "output" field, or to stdout.

#include "mzd/commands.hpp"
#include "mzd/scenario.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int run(const std::string& command, const Options& options) {
  nlohmann::json config =
      options.config_path.empty() ? nlohmann::json::object() : mzd::load_config_file(options.config_path);
  for (const auto& assignment : options.overrides) mzd::apply_override(config, assignment);
  if (options.seed) config["noise"]["seed"] = *options.seed;
  if (!options.out.empty()) config["output"] = options.out;

  const mzd::ScenarioConfig scenario = mzd::parse_scenario(config);
  const std::string csv = mzd::run_command(command, scenario).to_csv();

  if (scenario.output.empty()) {
    std::cout << csv;
    return 0;
  }
  std::ofstream file(scenario.output, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file '" + scenario.output + "'");
  file << csv;
  if (!file) throw std::runtime_error("write failed for '" + scenario.output + "'");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-path interferometer with polarization marking: duality, eraser and noise studies"};
  app.set_version_flag("--version", std::string("mzd ") + mzd::kToolVersion);
  app.require_subcommand(1);

  Options options;
  const std::vector<std::pair<std::string, std::string>> descriptions = {
      {"duality-scan", "V, K (fixed H/V and optimal basis) versus marker HWP angle"},
      {"mixed-scan", "duality sum for a partially mixed input versus HWP angle or purity"},
      {"eraser-scan", "conditional visibility and fringe phase versus linear analyzer angle"},
      {"poincare", "zero- and unit-visibility analyzer loci on the Poincare sphere"},
      {"montecarlo", "Poisson-noise estimates of V and K with background and efficiency mismatch"},
  };
  for (const auto& [name, description] : descriptions) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", options.config_path, "JSON scenario file")->check(CLI::ExistingFile);
    sub->add_option("--set", options.overrides, "override a config field, e.g. --set input.angle_deg=45")
        ->take_all();
    sub->add_option("--seed", options.seed, "master seed for the noise model (stored as noise.seed)");
    sub->add_option("--out", options.out, "output CSV path (default: stdout)");
  }

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, options);
  } catch (const std::exception& error) {
    std::cerr << "mzd " << command << ": " << error.what() << '\n';
    return 2;
  }
}
