#pragma once

// Two-dimensional polarization algebra: Jones vectors, density matrices,
// Stokes vectors and the waveplate / rotator unitaries.
//
// Conventions (used everywhere in the library):
//   * Jones basis is (|H>, |V>). Linear polarization at angle a (measured
//     from H towards V) is (cos a, sin a).
//   * Stokes: s1 = +1 <-> H, s2 = +1 <-> +45 deg linear, s3 = +1 <-> right
//     circular, with right circular defined as (|H> + i|V>)/sqrt(2).
//     Equivalently rho = (I + s1*Z + s2*X + s3*Y) / 2 with the usual Paulis.
//   * Angles are radians. Degrees appear only at the CLI/config boundary.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mzd {

template <typename Scalar>
using Complex = std::complex<Scalar>;
template <typename Scalar>
using Jones = Eigen::Matrix<Complex<Scalar>, 2, 1>;
template <typename Scalar>
using Matrix2c = Eigen::Matrix<Complex<Scalar>, 2, 2>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
constexpr Scalar deg_to_rad(Scalar degrees) {
  return degrees * std::numbers::pi_v<Scalar> / Scalar(180);
}
template <typename Scalar>
constexpr Scalar rad_to_deg(Scalar radians) {
  return radians * Scalar(180) / std::numbers::pi_v<Scalar>;
}

/// Tolerance used when validating values handed to constructors. Outputs of
/// the algebra are exact to ~1e-15; inputs arriving from user config or from
/// optimizers are accepted with this slack.
template <typename Scalar>
constexpr Scalar kValidationTolerance = Scalar(1e-9);

/// Normalized Jones vector.
template <typename Scalar>
class PolVector {
 public:
  explicit PolVector(const Jones<Scalar>& amplitudes) : jones_(amplitudes) {
    const Scalar norm = jones_.norm();
    if (!std::isfinite(norm) || norm <= Scalar(0)) {
      throw std::invalid_argument("PolVector: zero or non-finite amplitudes");
    }
    jones_ /= norm;
  }
  PolVector(Complex<Scalar> h, Complex<Scalar> v)
      : PolVector(Jones<Scalar>(h, v)) {}

  static PolVector horizontal() { return PolVector(Scalar(1), Scalar(0)); }
  static PolVector vertical() { return PolVector(Scalar(0), Scalar(1)); }
  static PolVector linear(Scalar angle) {
    return PolVector(std::cos(angle), std::sin(angle));
  }
  static PolVector right_circular() {
    return PolVector(Scalar(1), Complex<Scalar>(0, 1));
  }
  static PolVector left_circular() {
    return PolVector(Scalar(1), Complex<Scalar>(0, -1));
  }
  /// Poincare-sphere point: polar angle from the s1 (H) pole, azimuth about
  /// s1 measured from s2 towards s3.
  static PolVector from_sphere(Scalar polar, Scalar azimuth) {
    return PolVector(std::cos(polar / 2),
                     std::polar(std::sin(polar / 2), azimuth));
  }

  /// The orthogonal state (-conj(v), conj(h)).
  PolVector orthogonal() const {
    return PolVector(-std::conj(jones_(1)), std::conj(jones_(0)));
  }

  const Jones<Scalar>& jones() const { return jones_; }
  Complex<Scalar> h() const { return jones_(0); }
  Complex<Scalar> v() const { return jones_(1); }

 private:
  Jones<Scalar> jones_;
};

/// |<a|b>|^2
template <typename Scalar>
Scalar overlap(const PolVector<Scalar>& a, const PolVector<Scalar>& b) {
  return std::norm(a.jones().dot(b.jones()));
}

/// Polarization density matrix: Hermitian, unit trace, positive semidefinite.
template <typename Scalar>
class PolState {
 public:
  explicit PolState(const Matrix2c<Scalar>& rho) : rho_(rho) {
    const Scalar tol = kValidationTolerance<Scalar>;
    if (!rho_.allFinite()) {
      throw std::invalid_argument("PolState: non-finite matrix entries");
    }
    if ((rho_ - rho_.adjoint()).norm() > tol) {
      throw std::invalid_argument("PolState: matrix is not Hermitian");
    }
    if (std::abs(rho_.trace() - Complex<Scalar>(1)) > tol) {
      throw std::invalid_argument("PolState: trace is not 1");
    }
    // Symmetrize away round-off so downstream identities hold to ~1e-15.
    rho_ = (rho_ + rho_.adjoint().eval()) / Scalar(2);
    const Scalar det = rho_.determinant().real();
    if (det < -tol) {
      throw std::invalid_argument("PolState: matrix has a negative eigenvalue");
    }
  }

  static PolState pure(const PolVector<Scalar>& psi) {
    return PolState(psi.jones() * psi.jones().adjoint());
  }
  static PolState completely_mixed() {
    return PolState(Matrix2c<Scalar>::Identity() / Scalar(2));
  }

  const Matrix2c<Scalar>& matrix() const { return rho_; }

 private:
  Matrix2c<Scalar> rho_;
};

/// Stokes vector normalized to s0 = 1.
template <typename Scalar>
struct StokesVector {
  Scalar s0 = 1;
  Scalar s1 = 0;
  Scalar s2 = 0;
  Scalar s3 = 0;

  Vector3<Scalar> bloch() const { return {s1, s2, s3}; }
  Scalar degree_of_polarization() const { return bloch().norm(); }
  static StokesVector from_bloch(const Vector3<Scalar>& r) {
    return {Scalar(1), r(0), r(1), r(2)};
  }
};

template <typename Scalar>
StokesVector<Scalar> to_stokes(const PolState<Scalar>& state) {
  const auto& rho = state.matrix();
  const Complex<Scalar> hv = rho(0, 1);
  return {Scalar(1), (rho(0, 0) - rho(1, 1)).real(), Scalar(2) * hv.real(),
          Scalar(-2) * hv.imag()};
}

template <typename Scalar>
StokesVector<Scalar> to_stokes(const PolVector<Scalar>& psi) {
  return to_stokes(PolState<Scalar>::pure(psi));
}

/// Inverse of to_stokes. Rejects Bloch vectors longer than 1 + 1e-9.
template <typename Scalar>
PolState<Scalar> from_stokes(const StokesVector<Scalar>& s) {
  const Scalar r2 = s.s1 * s.s1 + s.s2 * s.s2 + s.s3 * s.s3;
  if (!std::isfinite(r2) || r2 > Scalar(1) + kValidationTolerance<Scalar>) {
    throw std::invalid_argument("from_stokes: unphysical Stokes vector (|s| > 1)");
  }
  using C = Complex<Scalar>;
  Matrix2c<Scalar> rho;
  rho << C(1 + s.s1), C(s.s2, -s.s3), C(s.s2, s.s3), C(1 - s.s1);
  return PolState<Scalar>(rho / Scalar(2));
}

/// Bloch length r, i.e. the weight s of the pure part in
/// rho = s|psi><psi| + (1 - s) I/2.
template <typename Scalar>
Scalar fractional_purity(const PolState<Scalar>& state) {
  return std::min(Scalar(1), to_stokes(state).degree_of_polarization());
}

/// Tr(rho^2) = (1 + s^2) / 2.
template <typename Scalar>
Scalar trace_purity(const PolState<Scalar>& state) {
  return (state.matrix() * state.matrix()).trace().real();
}

template <typename Scalar>
PolState<Scalar> partial_mix(const PolVector<Scalar>& psi, Scalar s) {
  if (!(s >= Scalar(0) && s <= Scalar(1))) {
    throw std::invalid_argument("partial_mix: purity must lie in [0, 1]");
  }
  const Matrix2c<Scalar> pure = psi.jones() * psi.jones().adjoint();
  return PolState<Scalar>(s * pure +
                          (Scalar(1) - s) * Matrix2c<Scalar>::Identity() / Scalar(2));
}

/// Phase-randomized recombination of the H and V outputs of a PBS fed with
/// linear polarization at theta_in: cos^2 |H><H| + sin^2 |V><V|.
template <typename Scalar>
PolState<Scalar> tunable_source(Scalar theta_in) {
  const Scalar c = std::cos(theta_in);
  const Scalar s = std::sin(theta_in);
  Matrix2c<Scalar> rho = Matrix2c<Scalar>::Zero();
  rho(0, 0) = c * c;
  rho(1, 1) = s * s;
  return PolState<Scalar>(rho);
}

enum class ElementKind { HWP, QWP, ROTATOR, CUSTOM };

inline const char* to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::HWP: return "hwp";
    case ElementKind::QWP: return "qwp";
    case ElementKind::ROTATOR: return "rotator";
    case ElementKind::CUSTOM: return "custom";
  }
  return "?";
}

/// A 2x2 unitary tagged with the optical element it represents.
template <typename Scalar>
struct ElementUnitary {
  ElementKind kind = ElementKind::CUSTOM;
  Scalar parameter = 0;  // axis or rotation angle, radians
  Matrix2c<Scalar> matrix = Matrix2c<Scalar>::Identity();

  static ElementUnitary identity() { return {}; }

  ElementUnitary adjoint() const {
    return {ElementKind::CUSTOM, Scalar(0), matrix.adjoint()};
  }
};

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> rotation_matrix(Scalar angle) {
  Eigen::Matrix<Scalar, 2, 2> r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

/// Half-wave plate with fast axis at theta: reflects linear polarization
/// about the axis, so angle a goes to 2*theta - a. Traceless, det = -1.
template <typename Scalar>
ElementUnitary<Scalar> hwp(Scalar theta) {
  const Scalar c = std::cos(2 * theta);
  const Scalar s = std::sin(2 * theta);
  Matrix2c<Scalar> m;
  m << c, s, s, -c;
  return {ElementKind::HWP, theta, m};
}

/// Quarter-wave plate with fast axis at theta: R(theta) diag(1, i) R(-theta).
template <typename Scalar>
ElementUnitary<Scalar> qwp(Scalar theta) {
  const Matrix2c<Scalar> r = rotation_matrix(theta).template cast<Complex<Scalar>>();
  Matrix2c<Scalar> retarder = Matrix2c<Scalar>::Zero();
  retarder(0, 0) = 1;
  retarder(1, 1) = Complex<Scalar>(0, 1);
  return {ElementKind::QWP, theta, r * retarder * r.transpose()};
}

/// Optically active rotator: real rotation by delta. Eigenmodes are circular.
template <typename Scalar>
ElementUnitary<Scalar> rotator(Scalar delta) {
  return {ElementKind::ROTATOR, delta,
          rotation_matrix(delta).template cast<Complex<Scalar>>()};
}

/// Wraps an arbitrary matrix; rejects it unless U U^dagger = I within 1e-9.
template <typename Scalar>
ElementUnitary<Scalar> custom_element(const Matrix2c<Scalar>& m) {
  if (!m.allFinite() ||
      (m * m.adjoint() - Matrix2c<Scalar>::Identity()).norm() >
          kValidationTolerance<Scalar>) {
    throw std::invalid_argument("custom element is not unitary");
  }
  return {ElementKind::CUSTOM, Scalar(0), m};
}

template <typename Scalar>
ElementUnitary<Scalar> operator*(const ElementUnitary<Scalar>& a,
                                 const ElementUnitary<Scalar>& b) {
  return {ElementKind::CUSTOM, Scalar(0), a.matrix * b.matrix};
}

template <typename Scalar>
PolVector<Scalar> apply(const ElementUnitary<Scalar>& u, const PolVector<Scalar>& psi) {
  return PolVector<Scalar>(u.matrix * psi.jones());
}

/// U rho U^dagger
template <typename Scalar>
PolState<Scalar> apply(const ElementUnitary<Scalar>& u, const PolState<Scalar>& rho) {
  return PolState<Scalar>(u.matrix * rho.matrix() * u.matrix.adjoint());
}

/// Analyzer state selected by a QWP at qwp_angle followed by a HWP at
/// hwp_angle and a polarizer transmitting H: (HWP * QWP)^dagger |H>.
template <typename Scalar>
PolVector<Scalar> analyzer_from_waveplates(Scalar qwp_angle, Scalar hwp_angle) {
  const Matrix2c<Scalar> u = hwp(hwp_angle).matrix * qwp(qwp_angle).matrix;
  return PolVector<Scalar>(u.adjoint() * PolVector<Scalar>::horizontal().jones());
}

/// Pure state whose Stokes vector points along direction (normalized here).
template <typename Scalar>
PolVector<Scalar> pol_vector_from_bloch(const Vector3<Scalar>& direction) {
  const Vector3<Scalar> r = direction.normalized();
  const Scalar polar = std::acos(std::clamp(r(0), Scalar(-1), Scalar(1)));
  return PolVector<Scalar>::from_sphere(polar, std::atan2(r(2), r(1)));
}

/// Eigenvector of the largest eigenvalue of a Hermitian 2x2 matrix.
template <typename Scalar>
PolVector<Scalar> dominant_state(const Matrix2c<Scalar>& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix2c<Scalar>> solver(hermitian);
  return PolVector<Scalar>(solver.eigenvectors().col(1));
}

/// True when a and b agree up to a global phase, |<a|b>| >= 1 - tol.
template <typename Scalar>
bool same_ray(const PolVector<Scalar>& a, const PolVector<Scalar>& b,
              Scalar tol = Scalar(1e-12)) {
  return std::abs(a.jones().dot(b.jones())) >= Scalar(1) - tol;
}

}  // namespace mzd
