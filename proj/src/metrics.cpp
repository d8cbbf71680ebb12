#include "mzd/metrics.hpp"

#include "mzd/errors.hpp"
#include "mzd/search.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mzd {
namespace {

constexpr double kPi = std::numbers::pi;

double expectation(const PolVectord& state, const Matrix2cd& m) {
  return state.jones().dot(m * state.jones()).real();
}

std::array<Matrix2cd, 3> paulis() {
  using C = std::complex<double>;
  Matrix2cd x, y, z;
  x << 0, 1, 1, 0;
  y << 0, C(0, -1), C(0, 1), 0;
  z << 1, 0, 0, -1;
  return {x, y, z};
}

Matrix4cd kron(const Matrix2cd& a, const Matrix2cd& b) {
  Matrix4cd out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  }
  return out;
}

Vector3d unit_from_angles(double polar, double azimuth) {
  return {std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth),
          std::cos(polar)};
}

}  // namespace

PathRates rates_in_basis(const JointStated& joint, const AnalyzerSetting& basis) {
  const PolVectord lambda = basis.lambda;
  const PolVectord perp = basis.lambda_perp();
  PathRates rates;
  rates.r1_lambda = std::max(0.0, expectation(lambda, joint.rho11));
  rates.r1_perp = std::max(0.0, expectation(perp, joint.rho11));
  rates.r2_lambda = std::max(0.0, expectation(lambda, joint.rho22));
  rates.r2_perp = std::max(0.0, expectation(perp, joint.rho22));
  return rates;
}

double likelihood(const PathRates& rates) {
  if (rates.r1_lambda < 0 || rates.r1_perp < 0 || rates.r2_lambda < 0 || rates.r2_perp < 0) {
    throw std::invalid_argument("likelihood: rates must be nonnegative");
  }
  // Grouped per analyzer output so that swapping lambda and lambda-perp
  // reproduces the same floating-point result.
  const double total = (rates.r1_lambda + rates.r2_lambda) + (rates.r1_perp + rates.r2_perp);
  if (!(total > 0)) {
    throw NoCountsError("likelihood: no counts in any path/detector combination");
  }
  // Ties pick path 1; either choice gives the same sum.
  const double best_lambda = rates.r1_lambda >= rates.r2_lambda ? rates.r1_lambda : rates.r2_lambda;
  const double best_perp = rates.r1_perp >= rates.r2_perp ? rates.r1_perp : rates.r2_perp;
  return (best_lambda + best_perp) / total;
}

double knowledge(const JointStated& joint, const AnalyzerSetting& basis) {
  return 2 * likelihood(rates_in_basis(joint, basis)) - 1;
}

AnalyzerSetting optimal_linear_basis(double phi1, double phi2) {
  return AnalyzerSetting::linear((phi1 + phi2) / 2 + kPi / 4);
}

Distinguishability distinguishability(const JointStated& joint) {
  constexpr std::size_t kPolar = 33;
  constexpr std::size_t kAzimuth = 64;
  const std::array<GridAxis, 2> axes = {
      GridAxis{0.0, kPi / (kPolar - 1), kPolar},
      GridAxis{0.0, 2 * kPi / kAzimuth, kAzimuth},
  };
  const auto objective = [&](std::span<const double> x) {
    return knowledge(joint, {PolVectord::from_sphere(x[0], x[1])});
  };
  const SearchResult best = maximize_grid_refine(objective, axes, 1e-10);
  return {std::clamp(best.value, 0.0, 1.0),
          {PolVectord::from_sphere(best.argmax[0], best.argmax[1])}};
}

MetricsResult duality_check(const JointStated& joint) {
  MetricsResult result;
  result.visibility = visibility(joint);
  const Distinguishability d = distinguishability(joint);
  result.distinguishability = d.value;
  result.knowledge = d.value;
  result.likelihood = (1 + d.value) / 2;
  result.basis_used = d.basis;
  result.predictability = std::abs(joint.w1() - joint.w2());
  result.duality_sum = result.visibility * result.visibility + result.knowledge * result.knowledge;
  return result;
}

double duality_law(const PolStated& input) { return 2 * trace_purity(input) - 1; }

double visibility_floor(double likelihood_value) {
  const double k = 2 * likelihood_value - 1;
  return std::sqrt(std::max(0.0, 1 - k * k));
}

Eigen::Matrix3d correlation_tensor(const JointStated& joint) {
  const Matrix4cd rho = joint.assembled();
  const auto sigma = paulis();
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Matrix4cd op = kron(sigma[i], sigma[j]);
      t(i, j) = (rho * op).trace().real();
    }
  }
  return t;
}

double chsh_combination(const JointStated& joint, const Vector3d& a, const Vector3d& a_prime,
                        const Vector3d& b, const Vector3d& b_prime) {
  const Eigen::Matrix3d t = correlation_tensor(joint);
  return a.dot(t * b) + a.dot(t * b_prime) + a_prime.dot(t * b) - a_prime.dot(t * b_prime);
}

ChshResult chsh_value(const JointStated& joint) {
  const Eigen::Matrix3d t = correlation_tensor(joint);
  const Eigen::Matrix3d tt = t.transpose();
  constexpr std::size_t kPolar = 9;
  constexpr std::size_t kAzimuth = 16;
  const GridAxis polar{0.0, kPi / (kPolar - 1), kPolar};
  const GridAxis azimuth{0.0, 2 * kPi / kAzimuth, kAzimuth};
  const std::array<GridAxis, 4> axes = {polar, azimuth, polar, azimuth};
  const auto objective = [&](std::span<const double> x) {
    const Vector3d a = unit_from_angles(x[0], x[1]);
    const Vector3d a_prime = unit_from_angles(x[2], x[3]);
    return (tt * (a + a_prime)).norm() + (tt * (a - a_prime)).norm();
  };
  const SearchResult best = maximize_grid_refine(objective, axes, 1e-10);

  ChshResult result;
  result.path_a = unit_from_angles(best.argmax[0], best.argmax[1]);
  result.path_a_prime = unit_from_angles(best.argmax[2], best.argmax[3]);
  const Vector3d plus = tt * (result.path_a + result.path_a_prime);
  const Vector3d minus = tt * (result.path_a - result.path_a_prime);
  result.pol_b = plus.norm() > 0 ? Vector3d(plus.normalized()) : Vector3d::UnitZ();
  result.pol_b_prime = minus.norm() > 0 ? Vector3d(minus.normalized()) : Vector3d::UnitZ();
  result.value = best.value;
  return result;
}

}  // namespace mzd
