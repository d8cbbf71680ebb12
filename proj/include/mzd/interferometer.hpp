#pragma once

// Joint path (x) polarization state of a Mach-Zehnder interferometer whose
// paths carry polarization elements, and the detector intensities it yields.
//
// The relative path phase phi is applied at readout. The recombining beam
// splitter is a symmetric 50/50 splitter; entry-splitter asymmetry lives in
// w1 (path-1 weight). Detector intensities are normalized so that port 1
// reads I(phi) = w1 + w2 + 2 Re(e^{i phi} Tr rho12) and port 2 the complement
// w1 + w2 - 2 Re(...), hence I1 + I2 = 2 (the probability at a port is I/2).

#include "mzd/polarization.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace mzd {

template <typename Scalar>
using Matrix4c = Eigen::Matrix<Complex<Scalar>, 4, 4>;

enum class DetectorPort { One, Two };

template <typename Scalar>
struct InterferometerConfig {
  Scalar w1 = Scalar(0.5);  // entry reflectivity; path-2 weight is 1 - w1
  ElementUnitary<Scalar> path1_element = ElementUnitary<Scalar>::identity();
  ElementUnitary<Scalar> path2_element = ElementUnitary<Scalar>::identity();
  Scalar intrinsic_visibility = Scalar(1);  // V0, scales the coherence block
  std::optional<ElementUnitary<Scalar>> residual1;
  std::optional<ElementUnitary<Scalar>> residual2;

  Scalar w2() const { return Scalar(1) - w1; }

  /// Net unitary seen in path 1 (residual applied after the element).
  Matrix2c<Scalar> path1_unitary() const {
    return residual1 ? Matrix2c<Scalar>(residual1->matrix * path1_element.matrix)
                     : path1_element.matrix;
  }
  Matrix2c<Scalar> path2_unitary() const {
    return residual2 ? Matrix2c<Scalar>(residual2->matrix * path2_element.matrix)
                     : path2_element.matrix;
  }

  void validate() const {
    if (!(w1 >= Scalar(0) && w1 <= Scalar(1))) {
      throw std::invalid_argument("InterferometerConfig: w1 must lie in [0, 1]");
    }
    if (!(intrinsic_visibility >= Scalar(0) && intrinsic_visibility <= Scalar(1))) {
      throw std::invalid_argument("InterferometerConfig: intrinsic visibility must lie in [0, 1]");
    }
  }
};

/// Path-indexed blocks of the 4x4 density matrix (index = 2 * path + pol).
template <typename Scalar>
struct JointState {
  Matrix2c<Scalar> rho11;
  Matrix2c<Scalar> rho12;
  Matrix2c<Scalar> rho22;

  Scalar w1() const { return rho11.trace().real(); }
  Scalar w2() const { return rho22.trace().real(); }

  Matrix4c<Scalar> assembled() const {
    Matrix4c<Scalar> m;
    m << rho11, rho12, rho12.adjoint(), rho22;
    return m;
  }
};

/// I(phi) = A + B cos(phi - phase_offset)
template <typename Scalar>
struct FringeProfile {
  Scalar mean = 0;       // A
  Scalar amplitude = 0;  // B
  Scalar phase_offset = 0;

  Scalar visibility() const { return mean > Scalar(0) ? amplitude / mean : Scalar(0); }
  Scalar at(Scalar phi) const { return mean + amplitude * std::cos(phi - phase_offset); }
};

template <typename Scalar>
JointState<Scalar> build_joint(const PolState<Scalar>& input,
                               const InterferometerConfig<Scalar>& config) {
  config.validate();
  const Matrix2c<Scalar> u1 = config.path1_unitary();
  const Matrix2c<Scalar> u2 = config.path2_unitary();
  const Matrix2c<Scalar>& rho = input.matrix();
  const Scalar w1 = config.w1;
  const Scalar w2 = config.w2();
  JointState<Scalar> joint;
  joint.rho11 = w1 * u1 * rho * u1.adjoint();
  joint.rho22 = w2 * u2 * rho * u2.adjoint();
  joint.rho12 = config.intrinsic_visibility * std::sqrt(w1 * w2) * u1 * rho * u2.adjoint();
  return joint;
}

template <typename Scalar>
Scalar detector_intensity(const JointState<Scalar>& joint, Scalar phi, DetectorPort port) {
  const Scalar base = joint.w1() + joint.w2();
  const Scalar cross =
      Scalar(2) * (std::polar(Scalar(1), phi) * joint.rho12.trace()).real();
  const Scalar value = port == DetectorPort::One ? base + cross : base - cross;
  return std::max(Scalar(0), value);
}

template <typename Scalar>
FringeProfile<Scalar> fringe(const JointState<Scalar>& joint,
                             DetectorPort port = DetectorPort::One) {
  const Complex<Scalar> coherence = joint.rho12.trace();
  FringeProfile<Scalar> profile;
  profile.mean = joint.w1() + joint.w2();
  profile.amplitude = Scalar(2) * std::abs(coherence);
  profile.phase_offset = -std::arg(coherence);
  if (port == DetectorPort::Two) {
    profile.phase_offset += std::numbers::pi_v<Scalar>;
  }
  return profile;
}

template <typename Scalar>
Scalar visibility(const JointState<Scalar>& joint) {
  return fringe(joint).visibility();
}

/// A-priori which-way knowledge |w1 - w2|.
template <typename Scalar>
Scalar predictability(const InterferometerConfig<Scalar>& config) {
  return std::abs(config.w1 - config.w2());
}

}  // namespace mzd
