#include "mzd/commands.hpp"

#include "mzd/eraser.hpp"
#include "mzd/errors.hpp"
#include "mzd/metrics.hpp"
#include "mzd/montecarlo.hpp"

#include <cmath>

namespace mzd {
namespace {

const char* axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::ThetaHwp: return "theta_hwp";
    case SweepAxis::Analyzer: return "analyzer";
    case SweepAxis::Purity: return "purity";
    case SweepAxis::Phi: return "phi";
  }
  return "?";
}

OutputTable make_table(const char* command, const ScenarioConfig& config,
                       std::vector<std::string> headers) {
  OutputTable table(std::move(headers));
  table.set_metadata("tool", std::string("mzd ") + kToolVersion);
  table.set_metadata("command", command);
  table.set_metadata("config_hash", config_hash(config.effective));
  table.set_metadata("seed", config.seed_given ? std::to_string(config.noise->seed) : "none");
  table.set_metadata("units", "angles in degrees; rates in counts/second");
  return table;
}

/// Sweep values for `axis`, falling back to the default grid when the config
/// has no sweep block.
std::vector<double> sweep_values(const ScenarioConfig& config,
                                 std::initializer_list<SweepAxis> allowed,
                                 std::vector<double> fallback) {
  if (!config.sweep) return fallback;
  for (SweepAxis axis : allowed) {
    if (config.sweep->axis == axis) return config.sweep->values;
  }
  throw ConfigError("sweep.axis", std::string("axis '") + axis_name(config.sweep->axis) +
                                      "' is not supported by this command");
}

void require_hwp_marker(const ScenarioConfig& config) {
  if (config.marker.kind != ElementKind::HWP) {
    throw ConfigError("marker.kind", "this command scans an hwp marker; set marker.kind to hwp");
  }
}

std::string join_numbers(std::initializer_list<double> values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ";";
    out += format_number(v);
  }
  return out;
}

}  // namespace

OutputTable cmd_duality_scan(const ScenarioConfig& config) {
  require_hwp_marker(config);
  const auto thetas = sweep_values(config, {SweepAxis::ThetaHwp}, make_grid(0, 90, 1));
  const PolStated input = config.input.state();
  OutputTable table = make_table("duality-scan", config,
                                 {"theta_hwp_deg", "V", "K_fixed_HV", "K_optimal", "V2_plus_K2_optimal"});
  for (const double theta : thetas) {
    const JointStated joint = build_joint(input, config.interferometer_with_hwp(theta));
    const double v = visibility(joint);
    const double k_hv = knowledge(joint, AnalyzerSetting::hv());
    const double k_opt = distinguishability(joint).value;
    table.add_row({theta, v, k_hv, k_opt, v * v + k_opt * k_opt});
  }
  return table;
}

OutputTable cmd_mixed_scan(const ScenarioConfig& config) {
  require_hwp_marker(config);
  const bool purity_sweep = config.sweep && config.sweep->axis == SweepAxis::Purity;
  const auto values = sweep_values(config, {SweepAxis::ThetaHwp, SweepAxis::Purity},
                                   make_grid(0, 90, 1));
  OutputTable table = make_table(
      "mixed-scan", config,
      {"purity", "theta_hwp_deg", "V", "K_optimal", "V2_plus_K2", "law_2Trrho2_minus_1"});
  for (const double value : values) {
    const PolStated input = purity_sweep ? config.input.state_with_purity(value) : config.input.state();
    const double theta = purity_sweep ? config.marker.angle_deg : value;
    const JointStated joint = build_joint(input, config.interferometer_with_hwp(theta));
    const MetricsResult m = duality_check(joint);
    table.add_row({fractional_purity(input), theta, m.visibility, m.knowledge, m.duality_sum,
                   duality_law(input)});
  }
  return table;
}

OutputTable cmd_eraser_scan(const ScenarioConfig& config) {
  const auto angles_deg = sweep_values(config, {SweepAxis::Analyzer}, make_grid(0, 180, 1));
  const PolStated input = config.input.state();
  const JointStated joint = build_joint(input, config.interferometer());
  OutputTable table =
      make_table("eraser-scan", config, {"analyzer_deg", "V_conditional", "fringe_phase_deg"});

  // Closed-form zeros apply to s|V><V| + (1 - s) I/2 with a bare HWP marker.
  const StokesVectord stokes = to_stokes(input);
  const bool closed_form = config.marker.kind == ElementKind::HWP &&
                           config.path2_element.kind == ElementKind::CUSTOM &&
                           config.path2_element.matrix.isIdentity() && !config.residual_path1 &&
                           !config.residual_path2 && std::abs(stokes.s2) < 1e-12 &&
                           std::abs(stokes.s3) < 1e-12 && stokes.s1 <= 1e-12;
  if (closed_form) {
    const auto zeros = zero_visibility_angles(deg(config.marker.angle_deg), -stokes.s1);
    // Round off the last few ulps so an exact 0 deg zero is not printed as 3e-15.
    const auto clean = [](double rad) {
      const double d = rad_to_deg(rad);
      return std::abs(d) < 1e-9 || std::abs(d - 180) < 1e-9 ? 0.0 : d;
    };
    table.set_metadata("zero_visibility_angles_deg", join_numbers({clean(zeros[0]), clean(zeros[1])}));
  } else {
    table.set_metadata("zero_visibility_angles_deg", "n/a");
  }

  for (const double angle : angles_deg) {
    ConditionalFringe f;
    try {
      f = conditional_fringe(joint, PolVectord::linear(deg(angle)));
    } catch (const UndefinedVisibilityError&) {
      throw UndefinedVisibilityError("eraser-scan: analyzer at " + format_number(angle) +
                                     " deg transmits no light");
    }
    table.add_row({angle, f.visibility, rad_to_deg(f.phase)});
  }
  return table;
}

OutputTable cmd_poincare(const ScenarioConfig& config) {
  if (config.sweep) throw ConfigError("sweep", "poincare takes no sweep");
  const PolStated input = config.input.state();
  const double purity = fractional_purity(input);
  LociKind kind;
  if (std::abs(purity - 1) <= 1e-6) {
    kind = LociKind::Pure;
  } else if (purity <= 1e-6) {
    kind = LociKind::Mixed;
  } else {
    throw ConfigError("input", "poincare loci need a pure or completely mixed input");
  }
  const JointStated joint = build_joint(input, config.interferometer());
  const VisibilityLoci loci = poincare_loci(joint, kind);

  OutputTable table = make_table("poincare", config,
                                 {"role", "s1", "s2", "s3", "V_conditional", "fringe_phase_deg"});
  table.set_metadata("loci_kind", kind == LociKind::Pure ? "pure (points: V=0, circle: V=1)"
                                                         : "mixed (points: V=1, circle: V=0)");
  table.set_metadata("circle_normal", join_numbers({loci.normal(0), loci.normal(1), loci.normal(2)}));
  table.set_metadata("roles", "0=locus point, 1=great-circle sample");
  const auto emit = [&](double role, const Vector3d& point) {
    const ConditionalFringe f = conditional_fringe(joint, pol_vector_from_bloch(point));
    table.add_row({role, point(0), point(1), point(2), f.visibility, rad_to_deg(f.phase)});
  };
  for (const auto& point : loci.points) emit(0, point);
  for (const auto& point : great_circle(loci.normal, config.circle_samples)) emit(1, point);
  return table;
}

OutputTable cmd_montecarlo(const ScenarioConfig& config) {
  if (!config.noise) throw ConfigError("noise", "montecarlo needs a noise block");
  if (!config.seed_given) throw ConfigError("noise.seed", "montecarlo needs an explicit seed");
  require_hwp_marker(config);
  // A phi sweep fixes theta at the marker angle and replaces the two
  // extremum-anchored phase settings with the given grid.
  const bool phi_sweep = config.sweep && config.sweep->axis == SweepAxis::Phi;
  const auto thetas = phi_sweep ? std::vector<double>{config.marker.angle_deg}
                                : sweep_values(config, {SweepAxis::ThetaHwp}, make_grid(0, 90, 1));

  DualityScenario scenario;
  if (phi_sweep) {
    for (double phi : config.sweep->values) scenario.phase_grid.push_back(deg(phi));
    if (scenario.phase_grid.size() < 2) throw ConfigError("sweep.values", "a phi scan needs at least two points");
  }
  scenario.input = config.input.state();
  scenario.interferometer = config.interferometer();
  for (double t : thetas) scenario.theta_grid.push_back(deg(t));
  scenario.basis_policy = config.basis_policy;
  scenario.phase_points = config.phase_points;
  const NoiseModel& noise = *config.noise;

  OutputTable table = make_table(
      "montecarlo", config,
      {"theta_hwp_deg", "V_analytic", "V_hat", "V_hat_se", "K_analytic", "K_hat", "K_hat_se",
       "sum_analytic", "sum_hat", "sum_hat_se", "clamped_runs"});
  table.set_metadata("repetitions", std::to_string(config.repetitions));
  table.set_metadata("integration_time_s", format_number(noise.integration_time));
  table.set_metadata("background_rates", join_numbers({noise.background_d1, noise.background_d2}));
  table.set_metadata("efficiency_ratio", format_number(noise.efficiency_ratio));
  table.set_metadata("max_signal_rate", format_number(noise.max_signal_rate));
  table.set_metadata("basis_policy",
                     config.basis_policy == BasisPolicy::Optimal ? "optimal" : "hv");
  table.set_metadata("phase_points", phi_sweep ? std::to_string(scenario.phase_grid.size()) + " (phi sweep)"
                                               : std::to_string(config.phase_points));

  const auto points = run_duality_experiment(scenario, noise, config.repetitions);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const double sum_analytic = p.visibility_analytic * p.visibility_analytic +
                                p.knowledge_analytic * p.knowledge_analytic;
    table.add_row({thetas[i], p.visibility_analytic, p.visibility_mean, p.visibility_se,
                   p.knowledge_analytic, p.knowledge_mean, p.knowledge_se, sum_analytic,
                   p.sum_mean, p.sum_se, static_cast<double>(p.clamped_runs)});
  }
  return table;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"duality-scan", "mixed-scan", "eraser-scan",
                                                 "poincare", "montecarlo"};
  return names;
}

OutputTable run_command(std::string_view name, const ScenarioConfig& config) {
  if (name == "duality-scan") return cmd_duality_scan(config);
  if (name == "mixed-scan") return cmd_mixed_scan(config);
  if (name == "eraser-scan") return cmd_eraser_scan(config);
  if (name == "poincare") return cmd_poincare(config);
  if (name == "montecarlo") return cmd_montecarlo(config);
  throw std::invalid_argument("unknown command '" + std::string(name) + "'");
}

}  // namespace mzd
