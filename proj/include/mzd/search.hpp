#pragma once

// Deterministic grid + compass-refinement maximizer over a box of angles.

#include <cstddef>
#include <span>
#include <vector>

namespace mzd {

struct GridAxis {
  double start = 0;
  double step = 0;
  std::size_t count = 1;
};

inline constexpr int kMaxCompassIterations = 100000;

struct SearchResult {
  std::vector<double> argmax;
  double value = 0;
};

/// Evaluates f on the tensor grid (first axis varies slowest), keeps the
/// largest value with ties resolved towards the lowest grid index, then
/// polishes it by compass search until every step is below tolerance.
template <typename F>
SearchResult maximize_grid_refine(F&& f, std::span<const GridAxis> axes,
                                  double tolerance = 1e-10) {
  const std::size_t dims = axes.size();
  std::size_t total = 1;
  for (const auto& axis : axes) total *= axis.count;
  std::vector<double> point(dims);
  SearchResult best;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (std::size_t d = dims; d-- > 0;) {
      point[d] = axes[d].start + axes[d].step * static_cast<double>(rest % axes[d].count);
      rest /= axes[d].count;
    }
    const double value = f(std::span<const double>(point));
    if (flat == 0 || value > best.value) {
      best.value = value;
      best.argmax = point;
    }
  }

  std::vector<double> steps(dims);
  for (std::size_t d = 0; d < dims; ++d) steps[d] = axes[d].step / 2;
  std::vector<double> trial = best.argmax;
  for (int iteration = 0; iteration < kMaxCompassIterations; ++iteration) {
    bool any_large = false;
    for (std::size_t d = 0; d < dims; ++d) {
      if (steps[d] < tolerance) continue;
      any_large = true;
      bool improved = false;
      for (const double sign : {1.0, -1.0}) {
        trial = best.argmax;
        trial[d] += sign * steps[d];
        const double value = f(std::span<const double>(trial));
        if (value > best.value) {
          best.value = value;
          best.argmax = trial;
          improved = true;
          break;
        }
      }
      if (!improved) steps[d] /= 2;
    }
    if (!any_large) break;
  }
  return best;
}

}  // namespace mzd
