#pragma once

#include "mzd/scenario.hpp"
#include "mzd/table.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace mzd {

inline constexpr const char* kToolVersion = "1.0.0";

/// theta_hwp_deg, V, K_fixed_HV, K_optimal, V2_plus_K2_optimal
OutputTable cmd_duality_scan(const ScenarioConfig& config);
/// purity, theta_hwp_deg, V, K_optimal, V2_plus_K2, law_2Trrho2_minus_1
OutputTable cmd_mixed_scan(const ScenarioConfig& config);
/// analyzer_deg, V_conditional, fringe_phase_deg (+ zero-visibility angles
/// in the metadata when the closed form applies)
OutputTable cmd_eraser_scan(const ScenarioConfig& config);
/// role (0 = locus point, 1 = great-circle sample), s1, s2, s3, V_conditional, fringe_phase_deg
OutputTable cmd_poincare(const ScenarioConfig& config);
/// Per theta_hwp point: analytic and estimated V, K, V^2 + K^2 with standard errors.
OutputTable cmd_montecarlo(const ScenarioConfig& config);

const std::vector<std::string>& command_names();
/// Dispatches by subcommand name; throws std::invalid_argument for unknown names.
OutputTable run_command(std::string_view name, const ScenarioConfig& config);

}  // namespace mzd
