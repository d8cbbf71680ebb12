#include "mzd/interferometer.hpp"
#include "mzd/types.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mzd;
using oracle::cd;

namespace {

InterferometerConfigd with_hwp(double theta_deg, double w1 = 0.5, double v0 = 1.0) {
  InterferometerConfigd c;
  c.path1_element = hwp(deg(theta_deg));
  c.w1 = w1;
  c.intrinsic_visibility = v0;
  return c;
}

double scan_visibility(const JointStated& j) {
  return oracle::phi_scan_visibility(j.w1() + j.w2(), j.rho12.trace());
}

}  // namespace

TEST(BuildJoint, EntangledStateAtFortyFiveDegrees) {
  const JointStated j = build_joint(PolStated::pure(PolVectord::vertical()), with_hwp(45));
  // (|1>|H> + |2>|V>)/sqrt(2) in the 2 * path + pol ordering.
  Eigen::Vector4cd psi(1, 0, 0, 1);
  psi /= std::sqrt(2.0);
  const Eigen::Matrix4cd expected = psi * psi.adjoint();
  // hwp(45) maps V to H with a sign; remove it by comparing up to the
  // global phase of the path-1 amplitude.
  const Eigen::Matrix4cd m = j.assembled();
  EXPECT_NEAR(std::abs(m(0, 3)), 0.5, 1e-15);
  EXPECT_LT((m.cwiseAbs() - expected.cwiseAbs()).norm(), 1e-15);
  EXPECT_NEAR(std::norm((m * m).trace()), 1.0, 1e-12);  // pure
}

TEST(BuildJoint, IdentityElementsGiveScaledInputCoherence) {
  std::mt19937_64 rng(1);
  for (double w1 : {0.3, 0.5, 0.8}) {
    InterferometerConfigd c;
    c.w1 = w1;
    const PolStated rho(oracle::random_density(rng));
    const JointStated j = build_joint(rho, c);
    EXPECT_LT((j.rho12 - std::sqrt(w1 * (1 - w1)) * rho.matrix()).norm(), 1e-15);
  }
  const JointStated pure = build_joint(PolStated::pure(PolVectord::linear(0.4)), InterferometerConfigd{});
  EXPECT_NEAR(visibility(pure), 1.0, 1e-12);
}

TEST(BuildJoint, MixedInputWithHwp45HasZeroCoherenceTrace) {
  const JointStated j = build_joint(PolStated::completely_mixed(), with_hwp(45));
  EXPECT_LT(std::abs(j.rho12.trace()), 1e-15);
}

TEST(BuildJoint, MatchesKroneckerOracleAndIsPositive) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 200; ++i) {
    const oracle::M2 rho = oracle::random_density(rng);
    const oracle::M2 u1 = oracle::random_unitary(rng), u2 = oracle::random_unitary(rng);
    const double w1 = u(rng), v0 = u(rng);
    InterferometerConfigd c;
    c.path1_element = custom_element(u1);
    c.path2_element = custom_element(u2);
    c.w1 = w1;
    c.intrinsic_visibility = v0;
    const Eigen::Matrix4cd m = build_joint(PolStated(rho), c).assembled();
    EXPECT_LT((m - oracle::joint_matrix(rho, u1, u2, w1, v0)).norm(), 1e-14);
    EXPECT_LT((m - m.adjoint()).norm(), 1e-14);
    EXPECT_NEAR(m.trace().real(), 1.0, 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
  }
}

TEST(BuildJoint, ResidualUnitaryActsAfterElement) {
  InterferometerConfigd c = with_hwp(10);
  c.residual1 = rotator(0.05);
  const JointStated j = build_joint(PolStated::pure(PolVectord::vertical()), c);
  const oracle::M2 u1 = rotator(0.05).matrix * hwp(deg(10)).matrix;
  const oracle::M2 rho = PolStated::pure(PolVectord::vertical()).matrix();
  EXPECT_LT((j.rho11 - 0.5 * u1 * rho * u1.adjoint()).norm(), 1e-15);
}

TEST(BuildJoint, RejectsInvalidConfig) {
  EXPECT_THROW(build_joint(PolStated::completely_mixed(), with_hwp(0, 1.2)), std::invalid_argument);
  EXPECT_THROW(build_joint(PolStated::completely_mixed(), with_hwp(0, 0.5, -0.1)), std::invalid_argument);
}

TEST(DetectorIntensity, ConstantWithoutCoherence) {
  const JointStated j = build_joint(PolStated::completely_mixed(), with_hwp(45));
  for (double phi = 0; phi < 7; phi += 0.1) {
    EXPECT_NEAR(detector_intensity(j, phi, DetectorPort::One), 1.0, 1e-15);
  }
}

TEST(DetectorIntensity, FullSwingForIdenticalPaths) {
  const JointStated j = build_joint(PolStated::pure(PolVectord::vertical()), with_hwp(0));
  double lo = 1e9, hi = -1e9;
  for (int k = 0; k < 720; ++k) {
    const double i = detector_intensity(j, 2 * oracle::kPi * k / 720, DetectorPort::One);
    lo = std::min(lo, i);
    hi = std::max(hi, i);
    EXPECT_GE(i, 0.0);
  }
  EXPECT_NEAR(lo, 0.0, 1e-12);
  EXPECT_NEAR(hi, 2.0, 1e-12);
  EXPECT_NEAR(visibility(j), 1.0, 1e-12);
}

TEST(DetectorIntensity, PortsConserveTotal) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    InterferometerConfigd c;
    c.path1_element = custom_element(oracle::random_unitary(rng));
    c.w1 = std::uniform_real_distribution<double>(0, 1)(rng);
    const JointStated j = build_joint(PolStated(oracle::random_density(rng)), c);
    for (double phi = 0; phi < 6.3; phi += 0.37) {
      EXPECT_NEAR(detector_intensity(j, phi, DetectorPort::One) + detector_intensity(j, phi, DetectorPort::Two),
                  2.0, 1e-12);
    }
  }
}

TEST(Fringe, ClosedFormMatchesPhiScan) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 300; ++i) {
    InterferometerConfigd c;
    c.path1_element = custom_element(oracle::random_unitary(rng));
    c.path2_element = custom_element(oracle::random_unitary(rng));
    c.w1 = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    const JointStated j = build_joint(PolStated(oracle::random_density(rng)), c);
    const FringeProfiled f = fringe(j, DetectorPort::One);
    // A 720-point grid resolves the extrema of a sinusoid to O(step^2) only
    // when the maximum sits on the grid, so evaluate on a grid aligned to
    // the oracle's own maximum as well.
    const double vis_scan = scan_visibility(j);
    EXPECT_NEAR(f.visibility(), vis_scan, 1e-4);
    const cd t = j.rho12.trace();
    const double aligned = oracle::phi_scan_visibility(j.w1() + j.w2(), t * std::exp(cd(0, -std::arg(t))));
    EXPECT_NEAR(f.visibility(), aligned, 1e-9);
    for (double phi = 0; phi < 6.3; phi += 0.5) {
      EXPECT_NEAR(f.at(phi), detector_intensity(j, phi, DetectorPort::One), 1e-12);
    }
    const FringeProfiled f2 = fringe(j, DetectorPort::Two);
    EXPECT_NEAR(f2.at(0.7), detector_intensity(j, 0.7, DetectorPort::Two), 1e-12);
  }
}

TEST(Fringe, PureVerticalFollowsCosTwoTheta) {
  for (double theta = 0; theta <= 90; theta += 1) {
    const JointStated j = build_joint(PolStated::pure(PolVectord::vertical()), with_hwp(theta));
    const double expected = std::abs(std::cos(2 * oracle::rad(theta)));
    EXPECT_NEAR(visibility(j), expected, 1e-12);
    EXPECT_NEAR(scan_visibility(j), expected, 1e-4);
  }
}

TEST(Fringe, CompletelyMixedWithHwp45HasNoVisibility) {
  EXPECT_NEAR(visibility(build_joint(PolStated::completely_mixed(), with_hwp(45))), 0.0, 1e-15);
}

TEST(Fringe, PartialMixFollowsPurityTimesCos) {
  for (double s : {0.0, 1.0 / 3, 0.65, 1.0}) {
    double best = 0;
    for (double theta = 0; theta <= 90; theta += 1) {
      const JointStated j = build_joint(partial_mix(PolVectord::vertical(), s), with_hwp(theta));
      EXPECT_NEAR(visibility(j), s * std::abs(std::cos(2 * oracle::rad(theta))), 1e-12);
      best = std::max(best, visibility(j));
    }
    EXPECT_NEAR(best, s, 1e-12);
  }
}

TEST(Fringe, AmplitudeScalesLinearlyWithIntrinsicVisibility) {
  const PolStated rho = partial_mix(PolVectord::linear(0.3), 0.8);
  const double b1 = fringe(build_joint(rho, with_hwp(12, 0.5, 1.0)), DetectorPort::One).amplitude;
  for (double v0 : {0.0, 0.25, 0.98}) {
    const FringeProfiled f = fringe(build_joint(rho, with_hwp(12, 0.5, v0)), DetectorPort::One);
    EXPECT_NEAR(f.amplitude, v0 * b1, 1e-15);
    EXPECT_NEAR(f.mean, 1.0, 1e-15);
  }
}

TEST(Fringe, VisibilityInvariantUnderGlobalUnitary) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const oracle::M2 u1 = oracle::random_unitary(rng), u2 = oracle::random_unitary(rng);
    const oracle::M2 g = oracle::random_unitary(rng);
    const PolStated rho(oracle::random_density(rng));
    InterferometerConfigd a, b;
    a.path1_element = custom_element(u1);
    a.path2_element = custom_element(u2);
    b.path1_element = custom_element(oracle::M2(g * u1));
    b.path2_element = custom_element(oracle::M2(g * u2));
    EXPECT_NEAR(visibility(build_joint(rho, a)), visibility(build_joint(rho, b)), 1e-12);
  }
}

TEST(Predictability, Examples) {
  EXPECT_NEAR(predictability(with_hwp(0, 0.5)), 0.0, 1e-15);
  EXPECT_NEAR(predictability(with_hwp(0, 0.49)), 0.02, 1e-12);
  EXPECT_NEAR(predictability(with_hwp(0, 1.0)), 1.0, 1e-15);
  std::mt19937_64 rng(10);
  for (int i = 0; i < 20; ++i) {
    EXPECT_NEAR(visibility(build_joint(PolStated(oracle::random_density(rng)), with_hwp(17, 1.0))), 0.0,
                1e-15);
  }
}

TEST(Predictability, ComplementsVisibilityForPureInputs) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    const PolStated rho = PolStated::pure(PolVectord(oracle::random_ket(rng)));
    for (double w1 = 0.05; w1 < 1.0; w1 += 0.15) {
      InterferometerConfigd bare;
      bare.w1 = w1;
      const double v = visibility(build_joint(rho, bare));
      const double p = predictability(bare);
      EXPECT_NEAR(v * v + p * p, 1.0, 1e-12);

      InterferometerConfigd marked = bare;
      marked.path1_element = custom_element(oracle::random_unitary(rng));
      const double vm = visibility(build_joint(rho, marked));
      EXPECT_LE(vm * vm + p * p, 1.0 + 1e-12);
    }
  }
}
