#pragma once

// Quantum-eraser analysis: fringes conditioned on a polarization analyzer
// placed after the interferometer, analyzer-angle scans, the zero-visibility
// analyzer angles for a partially mixed input, and the Poincare-sphere loci
// of zero and unit conditional visibility.

#include "mzd/types.hpp"

#include <array>
#include <span>
#include <vector>

namespace mzd {

struct ConditionalFringe {
  double visibility = 0;
  double phase = 0;             // fringe maximum position, in [0, 2 pi)
  double pass_probability = 0;  // <a|rho11|a> + <a|rho22|a>
};

/// Fringe seen behind an analyzer transmitting |a>:
///   V_a = 2 |<a|rho12|a>| / (<a|rho11|a> + <a|rho22|a>),
///   phase = -arg <a|rho12|a> (+ pi on port 2).
/// Throws UndefinedVisibilityError if the analyzer transmits nothing.
ConditionalFringe conditional_fringe(const JointStated& joint, const PolVectord& analyzer,
                                     DetectorPort port = DetectorPort::One);

/// Intensity at phase phi of the sub-ensemble passing |a>, in the same
/// normalization as detector_intensity. Summing over |a> and |a_perp>
/// reproduces the unconditioned intensity.
double conditional_intensity(const JointStated& joint, const PolVectord& analyzer, double phi,
                             DetectorPort port = DetectorPort::One);

struct EraserSample {
  double angle = 0;  // linear analyzer axis (radians); 0 for sphere samples
  Vector3d point = Vector3d::Zero();  // analyzer state on the Poincare sphere
  double visibility = 0;
  double phase = 0;
};

struct EraserCurve {
  std::vector<EraserSample> samples;
};

/// Linear-analyzer scan; samples are in the order of `angles`.
EraserCurve eraser_scan(const JointStated& joint, std::span<const double> angles);

/// Full-sphere mode: one sample per Poincare-sphere direction.
EraserCurve eraser_scan_sphere(const JointStated& joint, std::span<const Vector3d> points);

/// theta_hwp +/- arccos(s cos 2 theta_hwp) / 2, reduced modulo pi and sorted.
/// Valid for input s|V><V| + (1 - s) I/2 with a HWP at theta_hwp in path 1.
std::array<double, 2> zero_visibility_angles(double theta_hwp, double s);

enum class LociKind { Pure, Mixed };

/// Pure input: `points` are the two zero-visibility analyzer states (each
/// passes light from one path only) and the great circle with normal
/// `normal` bisects them with unit visibility. Mixed input: `points` are the
/// eigenmodes of the path-difference unitary U1 U2^dagger (unit visibility)
/// and the equidistant great circle has zero visibility.
struct VisibilityLoci {
  LociKind kind = LociKind::Pure;
  std::array<Vector3d, 2> points;
  Vector3d normal = Vector3d::UnitX();
};

/// Throws std::invalid_argument when `kind` disagrees with the purity of the
/// state carried by the joint (tolerance 1e-6), and std::domain_error when
/// the loci are degenerate (unmarked paths, no coherence).
VisibilityLoci poincare_loci(const JointStated& joint, LociKind kind);

/// n equally spaced unit vectors on the great circle orthogonal to normal.
std::vector<Vector3d> great_circle(const Vector3d& normal, std::size_t n);

}  // namespace mzd
