#include "mzd/eraser.hpp"

#include "mzd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mzd {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPassFloor = 1e-15;
constexpr double kLociPurityTolerance = 1e-6;

std::complex<double> sandwich(const PolVectord& a, const Matrix2cd& m) {
  return a.jones().dot(m * a.jones());
}

double wrap_two_pi(double phase) {
  double wrapped = std::fmod(phase, 2 * kPi);
  if (wrapped < 0) wrapped += 2 * kPi;
  return wrapped >= 2 * kPi ? 0.0 : wrapped;
}

double wrap_pi(double angle) {
  double wrapped = std::fmod(angle, kPi);
  if (wrapped < 0) wrapped += kPi;
  return wrapped >= kPi ? 0.0 : wrapped;
}

Matrix2cd normalized_block(const Matrix2cd& block) {
  return block / block.trace().real();
}

}  // namespace

ConditionalFringe conditional_fringe(const JointStated& joint, const PolVectord& analyzer,
                                     DetectorPort port) {
  const double pass = sandwich(analyzer, joint.rho11).real() + sandwich(analyzer, joint.rho22).real();
  if (!(pass > kPassFloor)) {
    throw UndefinedVisibilityError("conditional_fringe: analyzer transmits no light");
  }
  const std::complex<double> coherence = sandwich(analyzer, joint.rho12);
  ConditionalFringe result;
  result.pass_probability = pass;
  result.visibility = std::min(1.0, 2 * std::abs(coherence) / pass);
  double phase = -std::arg(coherence);
  if (port == DetectorPort::Two) phase += kPi;
  result.phase = wrap_two_pi(phase);
  return result;
}

double conditional_intensity(const JointStated& joint, const PolVectord& analyzer, double phi,
                             DetectorPort port) {
  const double pass = sandwich(analyzer, joint.rho11).real() + sandwich(analyzer, joint.rho22).real();
  const double cross = 2 * (std::polar(1.0, phi) * sandwich(analyzer, joint.rho12)).real();
  return port == DetectorPort::One ? pass + cross : pass - cross;
}

EraserCurve eraser_scan(const JointStated& joint, std::span<const double> angles) {
  EraserCurve curve;
  curve.samples.reserve(angles.size());
  for (const double angle : angles) {
    const PolVectord analyzer = PolVectord::linear(angle);
    const ConditionalFringe f = conditional_fringe(joint, analyzer);
    curve.samples.push_back({angle, to_stokes(analyzer).bloch(), f.visibility, f.phase});
  }
  return curve;
}

EraserCurve eraser_scan_sphere(const JointStated& joint, std::span<const Vector3d> points) {
  EraserCurve curve;
  curve.samples.reserve(points.size());
  for (const Vector3d& point : points) {
    const PolVectord analyzer = pol_vector_from_bloch(point);
    const ConditionalFringe f = conditional_fringe(joint, analyzer);
    curve.samples.push_back({0.0, point.normalized(), f.visibility, f.phase});
  }
  return curve;
}

std::array<double, 2> zero_visibility_angles(double theta_hwp, double s) {
  if (!(s >= 0 && s <= 1)) {
    throw std::invalid_argument("zero_visibility_angles: purity must lie in [0, 1]");
  }
  const double half = std::acos(std::clamp(s * std::cos(2 * theta_hwp), -1.0, 1.0)) / 2;
  std::array<double, 2> angles = {wrap_pi(theta_hwp - half), wrap_pi(theta_hwp + half)};
  std::sort(angles.begin(), angles.end());
  return angles;
}

VisibilityLoci poincare_loci(const JointStated& joint, LociKind kind) {
  const bool use_path2 = joint.w2() > 0;
  const Matrix2cd marker = normalized_block(use_path2 ? joint.rho22 : joint.rho11);
  const double purity = fractional_purity(PolStated(marker));

  VisibilityLoci loci;
  loci.kind = kind;
  if (kind == LociKind::Pure) {
    if (std::abs(purity - 1) > kLociPurityTolerance) {
      throw std::invalid_argument("poincare_loci: pure loci requested for a mixed input");
    }
    if (!(joint.w1() > 0 && joint.w2() > 0)) {
      throw std::domain_error("poincare_loci: a path carries no light");
    }
    const Vector3d s1 = to_stokes(dominant_state(joint.rho11)).bloch();
    const Vector3d s2 = to_stokes(dominant_state(joint.rho22)).bloch();
    // Orthogonal to path 2's polarization passes path 1 only, and vice versa.
    loci.points = {Vector3d(-s2), Vector3d(-s1)};
    const Vector3d chord = loci.points[0] - loci.points[1];
    if (chord.norm() < 1e-9) {
      throw std::domain_error("poincare_loci: paths carry identical polarization");
    }
    loci.normal = chord.normalized();
    return loci;
  }

  if (purity > kLociPurityTolerance) {
    throw std::invalid_argument("poincare_loci: mixed loci requested for a polarized input");
  }
  // For rho = I/2, rho12 is proportional to U1 U2^dagger.
  if (joint.rho12.norm() < 1e-12) {
    throw std::domain_error("poincare_loci: paths carry no mutual coherence");
  }
  Eigen::ComplexEigenSolver<Matrix2cd> solver(joint.rho12);
  const auto values = solver.eigenvalues();
  if (std::abs(values(0) - values(1)) < 1e-9 * std::abs(values(0))) {
    throw std::domain_error("poincare_loci: path-difference unitary is trivial");
  }
  loci.points = {to_stokes(PolVectord(solver.eigenvectors().col(0))).bloch(),
                 to_stokes(PolVectord(solver.eigenvectors().col(1))).bloch()};
  loci.normal = loci.points[0].normalized();
  return loci;
}

std::vector<Vector3d> great_circle(const Vector3d& normal, std::size_t n) {
  const Vector3d axis = normal.normalized();
  const Vector3d helper =
      std::abs(axis(0)) < 0.9 ? Vector3d::UnitX() : Vector3d::UnitY();
  const Vector3d u = axis.cross(helper).normalized();
  const Vector3d v = axis.cross(u);
  std::vector<Vector3d> points;
  points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2 * kPi * static_cast<double>(k) / static_cast<double>(n);
    points.push_back(std::cos(t) * u + std::sin(t) * v);
  }
  return points;
}

}  // namespace mzd
