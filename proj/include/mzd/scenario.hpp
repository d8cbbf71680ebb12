#pragma once

// Scenario configuration for the command-line front end. The config file is
// JSON; every angle is in degrees. See docs/config.md for the schema.

#include "mzd/montecarlo.hpp"
#include "mzd/types.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mzd {

/// Invalid configuration; what() names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class InputKind { Pure, PartialMix, TunableSource, Mixed };

struct InputSpec {
  InputKind kind = InputKind::Pure;
  double angle_deg = 90;  // linear polarization of the pure part
  double purity = 1;      // PartialMix only
  double theta_in_deg = 45;  // TunableSource only

  PolStated state() const;
  /// Same input with the pure fraction replaced (purity sweeps).
  PolStated state_with_purity(double s) const;
};

struct ElementSpec {
  ElementKind kind = ElementKind::CUSTOM;  // CUSTOM with identity matrix = no element
  double angle_deg = 0;
  Matrix2cd matrix = Matrix2cd::Identity();

  ElementUnitaryd unitary() const;
};

enum class SweepAxis { ThetaHwp, Analyzer, Purity, Phi };

struct SweepSpec {
  SweepAxis axis = SweepAxis::ThetaHwp;
  std::vector<double> values;  // degrees, or purity for SweepAxis::Purity
};

struct ScenarioConfig {
  nlohmann::json effective;  // config after overrides, as parsed
  InputSpec input;
  ElementSpec marker;
  ElementSpec path2_element;
  double w1 = 0.5;
  double intrinsic_visibility = 1;
  std::optional<ElementSpec> residual_path1;
  std::optional<ElementSpec> residual_path2;
  std::optional<SweepSpec> sweep;
  BasisPolicy basis_policy = BasisPolicy::Optimal;
  std::size_t circle_samples = 360;
  std::optional<NoiseModel> noise;  // present iff the config has a noise block
  bool seed_given = false;
  std::size_t repetitions = 100;
  std::size_t phase_points = 2;
  std::string output;

  /// Interferometer with `marker` in path 1.
  InterferometerConfigd interferometer() const;
  /// Same, with the path-1 element replaced by hwp(theta_deg).
  InterferometerConfigd interferometer_with_hwp(double theta_deg) const;
};

/// Reads and parses a JSON file. Throws ConfigError("config", ...) on I/O or
/// syntax errors.
nlohmann::json load_config_file(const std::string& path);

/// Applies `dotted.key=value`. The value is parsed as JSON when possible and
/// kept as a string otherwise.
void apply_override(nlohmann::json& config, const std::string& assignment);

ScenarioConfig parse_scenario(const nlohmann::json& config);

/// FNV-1a 64 of the canonical (sorted-key) JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

/// Uniform grid start, start + step, ... up to stop (inclusive within 1e-9 of a step).
std::vector<double> make_grid(double start, double stop, double step);

}  // namespace mzd
