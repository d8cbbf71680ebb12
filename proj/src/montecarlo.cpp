#include "mzd/montecarlo.hpp"

#include "mzd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mzd {
namespace {

constexpr std::uint64_t kBackgroundSetting = 0;
constexpr std::uint64_t kPath1Setting = 1;
constexpr std::uint64_t kPath2Setting = 2;
constexpr std::uint64_t kFirstPhaseSetting = 3;

std::string describe(const MeasurementSetting& setting) {
  std::ostringstream out;
  out.precision(12);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PhaseSetting>) {
          out << "phase:" << rad_to_deg(s.phi);
        } else if constexpr (std::is_same_v<T, BlockedPathSetting>) {
          out << "open_path:" << s.open_path;
        } else {
          out << "background";
        }
      },
      setting);
  return out.str();
}

double rate_of(const CountRecord& r) { return static_cast<double>(r.counts) / r.duration; }
double rate_variance(const CountRecord& r) {
  return static_cast<double>(r.counts) / (r.duration * r.duration);
}

struct Corrected {
  double rate = 0;
  bool clamped = false;
};

Corrected corrected_rate(const CountRecord& r, double background_rate) {
  const double value = rate_of(r) - background_rate;
  if (value < 0) return {0.0, true};
  return {value, false};
}

double mean_of(const std::vector<double>& v) {
  double sum = 0;
  for (double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

double sem_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0;
  const double m = mean_of(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

void NoiseModel::validate() const {
  if (!(background_d1 >= 0) || !(background_d2 >= 0) || !(max_signal_rate >= 0)) {
    throw std::invalid_argument("NoiseModel: rates must be nonnegative");
  }
  if (!(efficiency_ratio > 0)) {
    throw std::invalid_argument("NoiseModel: efficiency_ratio must be positive");
  }
  if (!(integration_time > 0)) {
    throw std::invalid_argument("NoiseModel: integration_time must be positive");
  }
}

double NoiseModel::efficiency(int detector) const {
  return detector == 1 ? 1.0 / efficiency_ratio : 1.0;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t repetition,
                          std::uint64_t grid_point, std::uint64_t setting) {
  return splitmix64(splitmix64(splitmix64(splitmix64(master) ^ repetition) ^ grid_point) ^ setting);
}

std::array<double, 2> relative_intensities(const JointStated& joint,
                                           const MeasurementSetting& setting) {
  return std::visit(
      [&](const auto& s) -> std::array<double, 2> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PhaseSetting>) {
          return {detector_intensity(joint, s.phi, DetectorPort::One) / 2,
                  detector_intensity(joint, s.phi, DetectorPort::Two) / 2};
        } else if constexpr (std::is_same_v<T, BlockedPathSetting>) {
          if (s.open_path != 1 && s.open_path != 2) {
            throw std::invalid_argument("BlockedPathSetting: open_path must be 1 or 2");
          }
          const PathRates rates = rates_in_basis(joint, s.basis);
          return s.open_path == 1 ? std::array<double, 2>{rates.r1_lambda, rates.r1_perp}
                                  : std::array<double, 2>{rates.r2_lambda, rates.r2_perp};
        } else {
          return {0.0, 0.0};
        }
      },
      setting);
}

std::uint64_t draw_counts(double rate, double duration, std::uint64_t stream) {
  std::mt19937_64 engine(stream);
  const double mean = rate * duration;
  if (!(mean > 0)) return 0;
  std::poisson_distribution<std::uint64_t> poisson(mean);
  return poisson(engine);
}

std::vector<CountRecord> simulate_counts(const JointStated& joint, const MeasurementSetting& setting,
                                         const NoiseModel& noise, std::uint64_t stream) {
  noise.validate();
  const auto intensity = relative_intensities(joint, setting);
  const std::string tag = describe(setting);
  const double t = noise.integration_time;
  std::mt19937_64 engine(stream);
  std::vector<CountRecord> records;
  records.reserve(2);
  for (int detector = 1; detector <= 2; ++detector) {
    const double background = detector == 1 ? noise.background_d1 : noise.background_d2;
    const double rate = noise.efficiency(detector) * noise.max_signal_rate * intensity[detector - 1] +
                        background;
    const double mean = rate * t;
    std::uint64_t counts = 0;
    if (mean > 0) {
      std::poisson_distribution<std::uint64_t> poisson(mean);
      counts = poisson(engine);
    }
    records.push_back({detector, tag, counts, t});
  }
  return records;
}

EstimationResult estimate_visibility(std::span<const CountRecord> scan,
                                     std::span<const CountRecord> background) {
  double bg_counts = 0;
  double bg_time = 0;
  std::size_t consumed = 0;
  for (const auto& r : background) {
    if (r.detector != 1) continue;
    bg_counts += static_cast<double>(r.counts);
    bg_time += r.duration;
    ++consumed;
  }
  const double bg_rate = bg_time > 0 ? bg_counts / bg_time : 0.0;
  const double bg_var = bg_time > 0 ? bg_counts / (bg_time * bg_time) : 0.0;

  const CountRecord* hi = nullptr;
  const CountRecord* lo = nullptr;
  for (const auto& r : scan) {
    if (r.detector != 1) continue;
    ++consumed;
    if (hi == nullptr || rate_of(r) > rate_of(*hi)) hi = &r;
    if (lo == nullptr || rate_of(r) < rate_of(*lo)) lo = &r;
  }
  if (hi == nullptr) {
    throw std::invalid_argument("estimate_visibility: no detector-1 scan records");
  }
  const Corrected max = corrected_rate(*hi, bg_rate);
  const Corrected min = corrected_rate(*lo, bg_rate);
  const double sum = max.rate + min.rate;
  if (!(sum > 0)) {
    throw NoCountsError("estimate_visibility: no signal above background");
  }
  EstimationResult result;
  result.estimate = (max.rate - min.rate) / sum;
  result.records_consumed = consumed;
  result.clamped = max.clamped || min.clamped;

  const double sum2 = sum * sum;
  const double d_max = 2 * min.rate / sum2;
  const double d_min = -2 * max.rate / sum2;
  double variance = d_max * d_max * rate_variance(*hi);
  if (lo != hi) variance += d_min * d_min * rate_variance(*lo);
  const double d_bg = -(d_max + d_min);
  variance += d_bg * d_bg * bg_var;
  result.standard_error = std::sqrt(variance);
  return result;
}

EstimationResult estimate_knowledge(const KnowledgeRecords& records, const NoiseModel& noise,
                                    KnowledgePipeline pipeline) {
  noise.validate();
  const double bg1 = pipeline.subtract_background ? rate_of(records.background_d1) : 0.0;
  const double bg2 = pipeline.subtract_background ? rate_of(records.background_d2) : 0.0;
  const double bg1_var = pipeline.subtract_background ? rate_variance(records.background_d1) : 0.0;
  const double bg2_var = pipeline.subtract_background ? rate_variance(records.background_d2) : 0.0;
  const double scale1 = pipeline.scale_efficiency ? noise.efficiency_ratio : 1.0;

  const Corrected c1l = corrected_rate(records.path1_d1, bg1);
  const Corrected c1p = corrected_rate(records.path1_d2, bg2);
  const Corrected c2l = corrected_rate(records.path2_d1, bg1);
  const Corrected c2p = corrected_rate(records.path2_d2, bg2);

  PathRates rates;
  rates.r1_lambda = scale1 * c1l.rate;
  rates.r1_perp = c1p.rate;
  rates.r2_lambda = scale1 * c2l.rate;
  rates.r2_perp = c2p.rate;

  const double l = likelihood(rates);
  EstimationResult result;
  result.estimate = 2 * l - 1;
  result.records_consumed = 6;
  result.clamped = c1l.clamped || c1p.clamped || c2l.clamped || c2p.clamped;

  // K = (|x| + |y|) / T, x = R1l - R2l, y = R1p - R2p.
  const double total = rates.total();
  const double sx = rates.r1_lambda >= rates.r2_lambda ? 1.0 : -1.0;
  const double sy = rates.r1_perp >= rates.r2_perp ? 1.0 : -1.0;
  const double k = result.estimate;
  const double g1l = (sx - k) / total * scale1;
  const double g2l = (-sx - k) / total * scale1;
  const double g1p = (sy - k) / total;
  const double g2p = (-sy - k) / total;
  double variance = g1l * g1l * rate_variance(records.path1_d1) +
                    g2l * g2l * rate_variance(records.path2_d1) +
                    g1p * g1p * rate_variance(records.path1_d2) +
                    g2p * g2p * rate_variance(records.path2_d2);
  variance += (g1l + g2l) * (g1l + g2l) * bg1_var;
  variance += (g1p + g2p) * (g1p + g2p) * bg2_var;
  result.standard_error = std::sqrt(variance);
  return result;
}

KnowledgeRecords simulate_knowledge_records(const JointStated& joint, const AnalyzerSetting& basis,
                                            const NoiseModel& noise, std::uint64_t repetition,
                                            std::uint64_t grid_point) {
  const auto seed = [&](std::uint64_t setting) {
    return stream_seed(noise.seed, repetition, grid_point, setting);
  };
  const auto bg = simulate_counts(joint, BackgroundSetting{}, noise, seed(kBackgroundSetting));
  const auto p1 = simulate_counts(joint, BlockedPathSetting{1, basis}, noise, seed(kPath1Setting));
  const auto p2 = simulate_counts(joint, BlockedPathSetting{2, basis}, noise, seed(kPath2Setting));
  return {p1[0], p1[1], p2[0], p2[1], bg[0], bg[1]};
}

VisibilityRecords simulate_visibility_records(const JointStated& joint,
                                              std::span<const double> phases,
                                              const NoiseModel& noise, std::uint64_t repetition,
                                              std::uint64_t grid_point) {
  VisibilityRecords records;
  records.background = simulate_counts(
      joint, BackgroundSetting{}, noise,
      stream_seed(noise.seed, repetition, grid_point, kBackgroundSetting));
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const auto r = simulate_counts(
        joint, PhaseSetting{phases[i]}, noise,
        stream_seed(noise.seed, repetition, grid_point, kFirstPhaseSetting + i));
    records.scan.insert(records.scan.end(), r.begin(), r.end());
  }
  return records;
}

std::vector<double> extremum_anchored_phases(const JointStated& joint, std::size_t count) {
  const double start = fringe(joint).phase_offset;
  std::vector<double> phases(count);
  for (std::size_t i = 0; i < count; ++i) {
    phases[i] = start + 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
  }
  return phases;
}

AnalyticPoint analytic_point(const DualityScenario& scenario, double theta) {
  InterferometerConfigd config = scenario.interferometer;
  config.path1_element = hwp(theta);
  AnalyticPoint point{build_joint(scenario.input, config), 0.0, 0.0, AnalyzerSetting::hv()};
  point.visibility = visibility(point.joint);
  if (scenario.basis_policy == BasisPolicy::Optimal) {
    const Distinguishability d = distinguishability(point.joint);
    point.knowledge = d.value;
    point.basis = d.basis;
  } else {
    point.knowledge = knowledge(point.joint, point.basis);
  }
  return point;
}

RepetitionResult run_repetition(const AnalyticPoint& point, const DualityScenario& scenario,
                                const NoiseModel& noise, std::uint64_t repetition,
                                std::uint64_t grid_point) {
  const auto phases = scenario.phase_grid.empty()
                          ? extremum_anchored_phases(point.joint, scenario.phase_points)
                          : scenario.phase_grid;
  const VisibilityRecords vis =
      simulate_visibility_records(point.joint, phases, noise, repetition, grid_point);
  const KnowledgeRecords know =
      simulate_knowledge_records(point.joint, point.basis, noise, repetition, grid_point);
  return {estimate_visibility(vis.scan, vis.background), estimate_knowledge(know, noise)};
}

std::vector<ExperimentPoint> run_duality_experiment(const DualityScenario& scenario,
                                                    const NoiseModel& noise,
                                                    std::size_t repetitions) {
  noise.validate();
  if (repetitions == 0) {
    throw std::invalid_argument("run_duality_experiment: repetitions must be positive");
  }
  if (scenario.phase_grid.empty() ? scenario.phase_points < 2 : scenario.phase_grid.size() < 2) {
    throw std::invalid_argument("run_duality_experiment: need at least two phase points");
  }
  std::vector<ExperimentPoint> points;
  points.reserve(scenario.theta_grid.size());
  for (std::size_t g = 0; g < scenario.theta_grid.size(); ++g) {
    const double theta = scenario.theta_grid[g];
    const AnalyticPoint analytic = analytic_point(scenario, theta);
    ExperimentPoint point;
    point.theta = theta;
    point.visibility_analytic = analytic.visibility;
    point.knowledge_analytic = analytic.knowledge;
    point.basis = analytic.basis;
    std::vector<double> vs, ks, sums;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      const RepetitionResult run = run_repetition(analytic, scenario, noise, rep, g);
      point.runs.push_back(run);
      vs.push_back(run.visibility.estimate);
      ks.push_back(run.knowledge.estimate);
      sums.push_back(run.visibility.estimate * run.visibility.estimate +
                     run.knowledge.estimate * run.knowledge.estimate);
      if (run.visibility.clamped || run.knowledge.clamped) ++point.clamped_runs;
    }
    point.visibility_mean = mean_of(vs);
    point.knowledge_mean = mean_of(ks);
    point.sum_mean = mean_of(sums);
    if (repetitions >= 2) {
      point.visibility_se = sem_of(vs);
      point.knowledge_se = sem_of(ks);
      point.sum_se = sem_of(sums);
    } else {
      const auto& run = point.runs.front();
      point.visibility_se = run.visibility.standard_error;
      point.knowledge_se = run.knowledge.standard_error;
      point.sum_se = 2 * std::hypot(run.visibility.estimate * run.visibility.standard_error,
                                    run.knowledge.estimate * run.knowledge.standard_error);
    }
    points.push_back(std::move(point));
  }
  return points;
}

}  // namespace mzd
