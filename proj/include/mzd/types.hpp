#pragma once

#include "mzd/interferometer.hpp"
#include "mzd/polarization.hpp"

namespace mzd {

using PolVectord = PolVector<double>;
using PolStated = PolState<double>;
using StokesVectord = StokesVector<double>;
using ElementUnitaryd = ElementUnitary<double>;
using InterferometerConfigd = InterferometerConfig<double>;
using JointStated = JointState<double>;
using FringeProfiled = FringeProfile<double>;
using Matrix2cd = Matrix2c<double>;
using Matrix4cd = Matrix4c<double>;
using Vector3d = Vector3<double>;

inline double deg(double degrees) { return deg_to_rad(degrees); }

}  // namespace mzd
