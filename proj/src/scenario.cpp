#include "mzd/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mzd {
namespace {

using nlohmann::json;

const json* find(const json& object, const char* key) {
  if (!object.is_object()) return nullptr;
  const auto it = object.find(key);
  return it == object.end() ? nullptr : &*it;
}

double number_at(const json& object, const char* key, double fallback, const std::string& path) {
  const json* value = find(object, key);
  if (value == nullptr) return fallback;
  if (!value->is_number()) throw ConfigError(path + "." + key, "expected a number");
  const double x = value->get<double>();
  if (!std::isfinite(x)) throw ConfigError(path + "." + key, "must be finite");
  return x;
}

std::string string_at(const json& object, const char* key, const std::string& fallback,
                      const std::string& path) {
  const json* value = find(object, key);
  if (value == nullptr) return fallback;
  if (!value->is_string()) throw ConfigError(path + "." + key, "expected a string");
  return value->get<std::string>();
}

std::size_t count_at(const json& object, const char* key, std::size_t fallback,
                     const std::string& path) {
  const json* value = find(object, key);
  if (value == nullptr) return fallback;
  if (!value->is_number_integer() || value->get<long long>() <= 0) {
    throw ConfigError(path + "." + key, "expected a positive integer");
  }
  return value->get<std::size_t>();
}

InputSpec parse_input(const json& node) {
  const std::string path = "input";
  if (!node.is_object()) throw ConfigError(path, "expected an object");
  InputSpec spec;
  const std::string kind = string_at(node, "kind", "pure", path);
  if (kind == "pure") {
    spec.kind = InputKind::Pure;
  } else if (kind == "partial_mix") {
    spec.kind = InputKind::PartialMix;
  } else if (kind == "tunable_source") {
    spec.kind = InputKind::TunableSource;
  } else if (kind == "mixed") {
    spec.kind = InputKind::Mixed;
  } else {
    throw ConfigError(path + ".kind", "unknown input kind '" + kind + "'");
  }
  spec.angle_deg = number_at(node, "angle_deg", 90, path);
  spec.purity = number_at(node, "purity", 1, path);
  if (!(spec.purity >= 0 && spec.purity <= 1)) {
    throw ConfigError(path + ".purity", "must lie in [0, 1]");
  }
  spec.theta_in_deg = number_at(node, "theta_in_deg", 45, path);
  return spec;
}

ElementSpec parse_element(const json& node, const std::string& path,
                          const char* default_kind = "identity") {
  if (!node.is_object()) throw ConfigError(path, "expected an object");
  ElementSpec spec;
  const std::string kind = string_at(node, "kind", default_kind, path);
  spec.angle_deg = number_at(node, "angle_deg", 0, path);
  if (kind == "identity") {
    spec.kind = ElementKind::CUSTOM;
  } else if (kind == "hwp") {
    spec.kind = ElementKind::HWP;
  } else if (kind == "qwp") {
    spec.kind = ElementKind::QWP;
  } else if (kind == "rotator") {
    spec.kind = ElementKind::ROTATOR;
  } else if (kind == "custom") {
    spec.kind = ElementKind::CUSTOM;
    const json* m = find(node, "matrix");
    // [[[re, im], [re, im]], [[re, im], [re, im]]]
    const bool shape_ok = m != nullptr && m->is_array() && m->size() == 2 &&
                          (*m)[0].is_array() && (*m)[0].size() == 2 && (*m)[1].is_array() &&
                          (*m)[1].size() == 2;
    if (!shape_ok) throw ConfigError(path + ".matrix", "expected a 2x2 array of [re, im] pairs");
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const json& cell = (*m)[i][j];
        if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number()) {
          throw ConfigError(path + ".matrix", "expected a 2x2 array of [re, im] pairs");
        }
        spec.matrix(i, j) = {cell[0].get<double>(), cell[1].get<double>()};
      }
    }
    try {
      (void)custom_element(spec.matrix);
    } catch (const std::invalid_argument&) {
      throw ConfigError(path + ".matrix", "matrix is not unitary");
    }
  } else {
    throw ConfigError(path + ".kind", "unknown element kind '" + kind + "'");
  }
  return spec;
}

SweepSpec parse_sweep(const json& node) {
  const std::string path = "sweep";
  if (!node.is_object()) throw ConfigError(path, "expected an object");
  SweepSpec spec;
  const std::string axis = string_at(node, "axis", "theta_hwp", path);
  if (axis == "theta_hwp") {
    spec.axis = SweepAxis::ThetaHwp;
  } else if (axis == "analyzer") {
    spec.axis = SweepAxis::Analyzer;
  } else if (axis == "purity") {
    spec.axis = SweepAxis::Purity;
  } else if (axis == "phi") {
    spec.axis = SweepAxis::Phi;
  } else {
    throw ConfigError(path + ".axis", "unknown sweep axis '" + axis + "'");
  }
  if (const json* values = find(node, "values")) {
    if (find(node, "start") || find(node, "stop") || find(node, "step")) {
      throw ConfigError(path, "give either values or start/stop/step, not both");
    }
    if (!values->is_array() || values->empty()) {
      throw ConfigError(path + ".values", "expected a non-empty array of numbers");
    }
    for (const auto& v : *values) {
      if (!v.is_number()) throw ConfigError(path + ".values", "expected numbers");
      spec.values.push_back(v.get<double>());
    }
    for (std::size_t i = 1; i < spec.values.size(); ++i) {
      if (!(spec.values[i] > spec.values[i - 1])) {
        throw ConfigError(path + ".values", "grid must be strictly increasing");
      }
    }
  } else {
    const double start = number_at(node, "start", 0, path);
    const double stop = number_at(node, "stop", start, path);
    const double step = number_at(node, "step", 1, path);
    if (!(step > 0)) throw ConfigError(path + ".step", "must be positive");
    if (stop < start) throw ConfigError(path + ".stop", "must not be below start");
    spec.values = make_grid(start, stop, step);
  }
  if (spec.axis == SweepAxis::Purity) {
    for (double s : spec.values) {
      if (!(s >= 0 && s <= 1)) throw ConfigError(path + ".values", "purity must lie in [0, 1]");
    }
  }
  return spec;
}

NoiseModel parse_noise(const json& node) {
  const std::string path = "noise";
  if (!node.is_object()) throw ConfigError(path, "expected an object");
  NoiseModel noise;
  noise.background_d1 = number_at(node, "background_d1", noise.background_d1, path);
  noise.background_d2 = number_at(node, "background_d2", noise.background_d2, path);
  noise.efficiency_ratio = number_at(node, "efficiency_ratio", noise.efficiency_ratio, path);
  noise.max_signal_rate = number_at(node, "max_signal_rate", noise.max_signal_rate, path);
  noise.integration_time = number_at(node, "integration_time_s", noise.integration_time, path);
  if (noise.background_d1 < 0) throw ConfigError(path + ".background_d1", "must be >= 0");
  if (noise.background_d2 < 0) throw ConfigError(path + ".background_d2", "must be >= 0");
  if (!(noise.efficiency_ratio > 0)) throw ConfigError(path + ".efficiency_ratio", "must be > 0");
  if (noise.max_signal_rate < 0) throw ConfigError(path + ".max_signal_rate", "must be >= 0");
  if (!(noise.integration_time > 0)) throw ConfigError(path + ".integration_time_s", "must be > 0");
  return noise;
}

}  // namespace

PolStated InputSpec::state() const {
  switch (kind) {
    case InputKind::Pure:
      return PolStated::pure(PolVectord::linear(deg(angle_deg)));
    case InputKind::PartialMix:
      return partial_mix(PolVectord::linear(deg(angle_deg)), purity);
    case InputKind::TunableSource:
      return tunable_source(deg(theta_in_deg));
    case InputKind::Mixed:
      return PolStated::completely_mixed();
  }
  return PolStated::completely_mixed();
}

PolStated InputSpec::state_with_purity(double s) const {
  return partial_mix(PolVectord::linear(deg(angle_deg)), s);
}

ElementUnitaryd ElementSpec::unitary() const {
  switch (kind) {
    case ElementKind::HWP: return hwp(deg(angle_deg));
    case ElementKind::QWP: return qwp(deg(angle_deg));
    case ElementKind::ROTATOR: return rotator(deg(angle_deg));
    case ElementKind::CUSTOM: return custom_element(matrix);
  }
  return ElementUnitaryd::identity();
}

InterferometerConfigd ScenarioConfig::interferometer() const {
  InterferometerConfigd config;
  config.w1 = w1;
  config.intrinsic_visibility = intrinsic_visibility;
  config.path1_element = marker.unitary();
  config.path2_element = path2_element.unitary();
  if (residual_path1) config.residual1 = residual_path1->unitary();
  if (residual_path2) config.residual2 = residual_path2->unitary();
  return config;
}

InterferometerConfigd ScenarioConfig::interferometer_with_hwp(double theta_deg) const {
  InterferometerConfigd config = interferometer();
  config.path1_element = hwp(deg(theta_deg));
  return config;
}

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
}

void apply_override(nlohmann::json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--set", "expected KEY=VALUE, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  if (!config.is_object()) config = json::object();
  json* node = &config;
  std::stringstream parts(key);
  std::string part;
  std::vector<std::string> segments;
  while (std::getline(parts, part, '.')) {
    if (part.empty()) throw ConfigError("--set", "empty path segment in '" + key + "'");
    segments.push_back(part);
  }
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    json& child = (*node)[segments[i]];
    if (!child.is_object()) child = json::object();
    node = &child;
  }
  (*node)[segments.back()] = value;
}

ScenarioConfig parse_scenario(const nlohmann::json& config) {
  if (!config.is_object()) throw ConfigError("config", "top level must be an object");
  static const char* kKnown[] = {"input", "marker", "path2_element", "interferometer", "sweep",
                                 "basis_policy", "circle_samples", "noise", "output"};
  for (const auto& [key, _] : config.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      throw ConfigError(key, "unknown configuration key");
    }
  }

  ScenarioConfig scenario;
  scenario.effective = config;
  if (const json* node = find(config, "input")) scenario.input = parse_input(*node);

  scenario.marker.kind = ElementKind::HWP;
  scenario.marker.angle_deg = 0;
  if (const json* node = find(config, "marker")) scenario.marker = parse_element(*node, "marker", "hwp");
  if (const json* node = find(config, "path2_element")) {
    scenario.path2_element = parse_element(*node, "path2_element");
  }
  if (const json* node = find(config, "interferometer")) {
    const std::string path = "interferometer";
    if (!node->is_object()) throw ConfigError(path, "expected an object");
    scenario.w1 = number_at(*node, "w1", 0.5, path);
    if (!(scenario.w1 >= 0 && scenario.w1 <= 1)) throw ConfigError(path + ".w1", "must lie in [0, 1]");
    scenario.intrinsic_visibility = number_at(*node, "intrinsic_visibility", 1, path);
    if (!(scenario.intrinsic_visibility >= 0 && scenario.intrinsic_visibility <= 1)) {
      throw ConfigError(path + ".intrinsic_visibility", "must lie in [0, 1]");
    }
    if (const json* r = find(*node, "residual_path1")) {
      scenario.residual_path1 = parse_element(*r, path + ".residual_path1");
    }
    if (const json* r = find(*node, "residual_path2")) {
      scenario.residual_path2 = parse_element(*r, path + ".residual_path2");
    }
  }
  if (const json* node = find(config, "sweep")) scenario.sweep = parse_sweep(*node);

  const std::string policy = string_at(config, "basis_policy", "optimal", "config");
  if (policy == "optimal") {
    scenario.basis_policy = BasisPolicy::Optimal;
  } else if (policy == "hv") {
    scenario.basis_policy = BasisPolicy::FixedHV;
  } else {
    throw ConfigError("basis_policy", "expected 'optimal' or 'hv'");
  }
  scenario.circle_samples = count_at(config, "circle_samples", 360, "config");

  if (const json* node = find(config, "noise")) {
    scenario.noise = parse_noise(*node);
    scenario.repetitions = count_at(*node, "repetitions", 100, "noise");
    scenario.phase_points = count_at(*node, "phase_points", 2, "noise");
    if (scenario.phase_points < 2) throw ConfigError("noise.phase_points", "must be at least 2");
    if (const json* seed = find(*node, "seed")) {
      if (!seed->is_number_unsigned() && !(seed->is_number_integer() && seed->get<long long>() >= 0)) {
        throw ConfigError("noise.seed", "expected a nonnegative integer");
      }
      scenario.noise->seed = seed->get<std::uint64_t>();
      scenario.seed_given = true;
    }
  }
  scenario.output = string_at(config, "output", "", "config");
  return scenario;
}

std::string config_hash(const nlohmann::json& config) {
  const std::string text = config.dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

std::vector<double> make_grid(double start, double stop, double step) {
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = start + step * static_cast<double>(i);
  return grid;
}

}  // namespace mzd
