#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "kmu/dataset.hpp"
#include "kmu/rng.hpp"

namespace kmu {

struct FitOptions {
  std::size_t max_iters = 300;
  /// Lloyd stops when the relative WCSS change falls below this.
  double tol = 1e-10;
  /// Run the single-point-move improvement pass after Lloyd.
  bool hartigan = true;
  /// Seeds restart 0 with these centers instead of k-means++.
  std::optional<CenterSet> warm_start;
  /// Project centers onto the ball of this radius about the origin after
  /// each update. Off by default.
  std::optional<double> clamp_radius;
  /// Record the objective after every assignment of the winning restart.
  bool record_trace = false;
  /// Threads used across restarts.
  std::size_t parallelism = 1;
};

struct KMeansFit {
  CenterSet centers;
  /// Index of the nearest center for each row (ties go to the lowest index).
  std::vector<std::uint32_t> assignments{};
  /// Empirical WCSS, equal to objective(data, centers).
  double wcss = 0.0;
  std::size_t restarts_used = 0;
  std::size_t best_restart = 0;
  /// Lloyd iterations of the winning restart.
  std::size_t iterations = 0;
  bool converged = false;
  double wall_time_s = 0.0;
  std::vector<double> trace{};
};

/// (1/n) * sum_j min_i ||x_j - a_i||^2, compensated, left to right over j.
double objective(const Dataset& data, const CenterSet& centers);

/// Number of distinct rows, counting stops at `limit`.
std::size_t count_distinct_rows(const Dataset& data, std::size_t limit);

/// Best of `restarts` runs of k-means++ seeding, Lloyd iterations and a
/// Hartigan-style single-point-move pass. Restart i draws from stream.split(i).
/// Throws ParameterError for k == 0 or restarts == 0 and InfeasibleError when k
/// exceeds the number of distinct rows.
KMeansFit fit(const Dataset& data, std::size_t k, std::size_t restarts, RngStream stream,
              const FitOptions& options = {});

double wcss(const Dataset& data, std::size_t k, std::size_t restarts, RngStream stream,
            const FitOptions& options = {});

}  // namespace kmu
