#pragma once

// Emulation of the photon-counting measurement pipeline: Poisson counts with
// detector backgrounds and unequal detector efficiencies, followed by the
// background-subtracted visibility and knowledge estimators.
//
// Detector model: detector 2 has unit efficiency and detector 1 has
// 1 / efficiency_ratio (efficiency_ratio = eta2 / eta1). A detector at
// relative intensity p (probability that a photon reaches it) registers
// Poisson(t * (eta * max_signal_rate * p + background)) counts.
//
// RNG streams: every (repetition, grid point, measurement setting) owns an
// std::mt19937_64 seeded with
//   splitmix64(splitmix64(splitmix64(splitmix64(master) ^ repetition) ^ grid_point) ^ setting)
// and draws detector 1 before detector 2. Runs are bit-exact for a given
// seed and independent of evaluation order.

#include "mzd/metrics.hpp"
#include "mzd/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mzd {

struct NoiseModel {
  double background_d1 = 250;  // counts/s
  double background_d2 = 250;  // counts/s
  double efficiency_ratio = 1.11;  // eta2 / eta1
  double max_signal_rate = 50000;  // counts/s at unit intensity and efficiency
  double integration_time = 10;    // s per setting
  std::uint64_t seed = 0;

  void validate() const;
  /// eta_d for detector 1 or 2.
  double efficiency(int detector) const;
};

/// Analyzer removed, both paths open, relative phase phi.
struct PhaseSetting {
  double phi = 0;
};
/// Analyzer in place, only `open_path` (1 or 2) unblocked.
struct BlockedPathSetting {
  int open_path = 1;
  AnalyzerSetting basis;
};
/// Interferometer input blocked.
struct BackgroundSetting {};

using MeasurementSetting = std::variant<PhaseSetting, BlockedPathSetting, BackgroundSetting>;

struct CountRecord {
  int detector = 1;
  std::string configuration;
  std::uint64_t counts = 0;
  double duration = 0;

  bool operator==(const CountRecord&) const = default;
};

struct EstimationResult {
  double estimate = 0;
  double standard_error = 0;
  std::size_t records_consumed = 0;
  bool clamped = false;  // a background-subtracted rate went negative and was set to 0
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t repetition,
                          std::uint64_t grid_point, std::uint64_t setting);

/// Probability that a photon reaches detector 1 / 2 under the setting.
std::array<double, 2> relative_intensities(const JointStated& joint,
                                           const MeasurementSetting& setting);

/// One record per detector (detector 1 first) for a single setting.
std::vector<CountRecord> simulate_counts(const JointStated& joint, const MeasurementSetting& setting,
                                         const NoiseModel& noise, std::uint64_t stream);

/// Draws Poisson(rate * duration) for a single detector. Zero mean gives 0.
std::uint64_t draw_counts(double rate, double duration, std::uint64_t stream);

/// Max/min of background-subtracted detector-1 rates over a phase scan,
/// V = (Max - Min) / (Max + Min), with Poisson error propagation (the
/// background estimate is shared by Max and Min). Detector-2 records are
/// ignored. Without background records nothing is subtracted.
EstimationResult estimate_visibility(std::span<const CountRecord> scan,
                                     std::span<const CountRecord> background);

struct KnowledgeRecords {
  CountRecord path1_d1;
  CountRecord path1_d2;
  CountRecord path2_d1;
  CountRecord path2_d2;
  CountRecord background_d1;
  CountRecord background_d2;
};

struct KnowledgePipeline {
  bool subtract_background = true;
  bool scale_efficiency = true;
};

/// Background-subtract, scale detector-1 rates by eta2/eta1, apply the
/// likelihood rule and return K = 2L - 1. Throws NoCountsError when the
/// corrected rates sum to zero.
EstimationResult estimate_knowledge(const KnowledgeRecords& records, const NoiseModel& noise,
                                    KnowledgePipeline pipeline = {});

/// Records for one knowledge measurement in `basis` (settings 0..2 of the
/// stream layout: background, path 1 open, path 2 open).
KnowledgeRecords simulate_knowledge_records(const JointStated& joint, const AnalyzerSetting& basis,
                                            const NoiseModel& noise, std::uint64_t repetition,
                                            std::uint64_t grid_point);

/// Phase-scan records (settings 3.. of the stream layout) at `phases`, plus
/// the shared background records.
struct VisibilityRecords {
  std::vector<CountRecord> scan;
  std::vector<CountRecord> background;
};
VisibilityRecords simulate_visibility_records(const JointStated& joint,
                                              std::span<const double> phases,
                                              const NoiseModel& noise, std::uint64_t repetition,
                                              std::uint64_t grid_point);

/// `count` phases spaced by 2 pi / count starting at the detector-1 fringe
/// maximum, so the scan contains both extrema when count is even.
std::vector<double> extremum_anchored_phases(const JointStated& joint, std::size_t count);

enum class BasisPolicy { FixedHV, Optimal };

struct DualityScenario {
  PolStated input = PolStated::pure(PolVectord::vertical());
  /// Path-1 element is replaced by hwp(theta) at every grid point.
  InterferometerConfigd interferometer;
  std::vector<double> theta_grid;  // radians
  BasisPolicy basis_policy = BasisPolicy::Optimal;
  std::size_t phase_points = 2;
  /// Explicit phase settings in radians. When non-empty they replace the
  /// extremum-anchored points and phase_points is ignored.
  std::vector<double> phase_grid;
};

struct RepetitionResult {
  EstimationResult visibility;
  EstimationResult knowledge;
};

struct ExperimentPoint {
  double theta = 0;
  double visibility_analytic = 0;
  double knowledge_analytic = 0;
  AnalyzerSetting basis;
  std::vector<RepetitionResult> runs;

  double visibility_mean = 0;
  double visibility_se = 0;  // standard error of the mean over repetitions
  double knowledge_mean = 0;
  double knowledge_se = 0;
  double sum_mean = 0;  // mean of V^2 + K^2
  double sum_se = 0;
  std::size_t clamped_runs = 0;
};

/// Analytic V, K and the analysis basis for one grid point.
struct AnalyticPoint {
  JointStated joint;
  double visibility = 0;
  double knowledge = 0;
  AnalyzerSetting basis;
};
AnalyticPoint analytic_point(const DualityScenario& scenario, double theta);

RepetitionResult run_repetition(const AnalyticPoint& point, const DualityScenario& scenario,
                                const NoiseModel& noise, std::uint64_t repetition,
                                std::uint64_t grid_point);

std::vector<ExperimentPoint> run_duality_experiment(const DualityScenario& scenario,
                                                    const NoiseModel& noise,
                                                    std::size_t repetitions);

}  // namespace mzd
