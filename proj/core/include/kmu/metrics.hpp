#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kmu/dataset.hpp"
#include "kmu/models.hpp"

namespace kmu {

/// Finite set of m >= 1 points in d dimensions with the Euclidean metric.
class FiniteMetricCloud {
 public:
  FiniteMetricCloud(std::size_t m, std::size_t d, std::vector<double> coords);
  FiniteMetricCloud(const CenterSet& centers);  // NOLINT(google-explicit-constructor)

  static FiniteMetricCloud from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return m_; }
  std::size_t dim() const noexcept { return d_; }
  std::span<const double> point(std::size_t i) const noexcept {
    return {coords_.data() + i * d_, d_};
  }

 private:
  std::size_t m_;
  std::size_t d_;
  std::vector<double> coords_;
};

/// Hausdorff distance: the larger of the two directed max-min distances.
double hausdorff(const FiniteMetricCloud& a, const FiniteMetricCloud& b);

inline constexpr std::size_t kMaxGromovHausdorffPoints = 4;

/// Gromov-Hausdorff distance of two finite clouds with at most four points
/// each, computed as half the minimal distortion over all correspondences.
/// Throws UnsupportedError beyond that size.
double gromov_hausdorff_small(const FiniteMetricCloud& a, const FiniteMetricCloud& b);

struct OrbitDistance {
  double distance = 0.0;
  std::size_t entry = 0;
  /// Orbit parameter of the nearest member, 0 for fixed entries.
  double angle = 0.0;
};

inline constexpr std::size_t kDefaultOrbitGrid = 3600;

/// Minimal Hausdorff distance from `centers` to any catalog member; orbit
/// entries are sampled at `orbit_grid` equally spaced angles in [0, 2*pi).
OrbitDistance orbit_distance(const CenterSet& centers, const PopulationCatalog& catalog,
                             std::size_t orbit_grid = kDefaultOrbitGrid);

}  // namespace kmu
