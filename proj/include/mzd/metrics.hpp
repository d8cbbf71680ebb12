#pragma once

// Which-way quantities: likelihood (betting on the path from a detector
// click), knowledge K = 2L - 1, distinguishability D = max K over analyzer
// bases, the duality sum V^2 + K^2 and a CHSH value for the path and
// polarization degrees of freedom.

#include "mzd/types.hpp"

#include <array>

namespace mzd {

/// Polarization analysis: detector 1 looks at |lambda>, detector 2 at the
/// orthogonal state.
struct AnalyzerSetting {
  PolVectord lambda = PolVectord::horizontal();

  PolVectord lambda_perp() const { return lambda.orthogonal(); }

  static AnalyzerSetting hv() { return {PolVectord::horizontal()}; }
  static AnalyzerSetting linear(double angle) { return {PolVectord::linear(angle)}; }
};

/// Single-path (other path blocked) rates per analyzer output.
struct PathRates {
  double r1_lambda = 0;
  double r1_perp = 0;
  double r2_lambda = 0;
  double r2_perp = 0;

  double total() const { return r1_lambda + r1_perp + r2_lambda + r2_perp; }
};

struct MetricsResult {
  double visibility = 0;
  double likelihood = 0.5;
  double knowledge = 0;
  double predictability = 0;
  double distinguishability = 0;
  AnalyzerSetting basis_used;
  double duality_sum = 0;  // V^2 + K^2
};

PathRates rates_in_basis(const JointStated& joint, const AnalyzerSetting& basis);

/// Betting-strategy likelihood: for each detector pick the path that
/// contributes most. Throws NoCountsError if every rate is zero and
/// std::invalid_argument on negative rates.
double likelihood(const PathRates& rates);

double knowledge(const JointStated& joint, const AnalyzerSetting& basis);

/// Best linear analysis for paths carrying linear polarizations at phi1 and
/// phi2: axis at (phi1 + phi2)/2 + 45 deg.
AnalyzerSetting optimal_linear_basis(double phi1, double phi2);

struct Distinguishability {
  double value = 0;
  AnalyzerSetting basis;
};

/// Maximizes knowledge over every analyzer state on the Poincare sphere:
/// 33 x 64 (polar x azimuth) grid followed by compass refinement.
Distinguishability distinguishability(const JointStated& joint);

/// V, D (as K), L, P and V^2 + D^2 for a joint state.
MetricsResult duality_check(const JointStated& joint);

/// 2 Tr(rho^2) - 1, the value of V^2 + D^2 for traceless (HWP-like) marking
/// in a balanced, fully coherent interferometer.
double duality_law(const PolStated& input);

/// Smallest visibility compatible with likelihood L for a pure marker:
/// sqrt(1 - (2L - 1)^2).
double visibility_floor(double likelihood_value);

/// Correlation tensor T_ij = Tr(rho sigma_i (x) sigma_j), path (x) polarization,
/// Pauli order (X, Y, Z).
Eigen::Matrix3d correlation_tensor(const JointStated& joint);

struct ChshResult {
  double value = 0;
  Vector3d path_a;
  Vector3d path_a_prime;
  Vector3d pol_b;
  Vector3d pol_b_prime;
};

/// Largest CHSH combination over spin-like analyzer directions on both
/// degrees of freedom. The path directions are searched numerically; for
/// fixed path directions the best polarization directions follow in closed
/// form, b ~ T^T (a + a') and b' ~ T^T (a - a').
ChshResult chsh_value(const JointStated& joint);

/// E(a, a', b, b') = <A B> + <A B'> + <A' B> - <A' B'>.
double chsh_combination(const JointStated& joint, const Vector3d& a, const Vector3d& a_prime,
                        const Vector3d& b, const Vector3d& b_prime);

}  // namespace mzd
