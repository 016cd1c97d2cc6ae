#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kmu/dataset.hpp"
#include "kmu/kmeans.hpp"
#include "kmu/rng.hpp"

namespace kmu {

struct BootstrapOptions {
  FitOptions fit;
  /// Seed one restart of every bootstrap fit with the original-sample centers.
  bool warm_start = true;
  /// Threads used across bootstrap draws.
  std::size_t parallelism = 1;
  /// Resamples with fewer than k distinct rows are redrawn up to this many
  /// times per draw before giving up.
  std::size_t max_redraws = 100;
};

/// Bootstrap replicates T*_b = sqrt(n) * (W*_b - W_n).
struct BootstrapDraws {
  std::vector<double> t_star;
  double base_wcss = 0.0;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t k = 0;
  std::size_t B = 0;
  std::size_t restarts = 0;
  std::uint64_t seed = 0;
  std::size_t redraws = 0;
  double base_fit_time_s = 0.0;
  double wall_time_s = 0.0;
};

/// W_n(k) on `data`, then B with-replacement resamples, each fitted with the
/// same restart budget. Draw b uses stream.split(b + 1); the base fit uses
/// stream.split(0). Throws ParameterError for B < 2 and NumericalError when a
/// draw exhausts its redraw budget.
BootstrapDraws bootstrap_draws(const Dataset& data, std::size_t k, std::size_t B,
                               std::size_t restarts, RngStream stream,
                               const BootstrapOptions& options = {});

struct UniquenessReport {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t k = 0;
  std::size_t B = 0;
  double alpha = 0.05;
  double base_wcss = 0.0;
  /// sum(T*) / (s* sqrt(B)).
  double t_bar_star = 0.0;
  /// Standard deviation of the T* with denominator B - 1.
  double s_star = 0.0;
  double threshold = 0.0;
  bool reject = false;
  /// All T* equal: no evidence against uniqueness, reject is false.
  bool degenerate = false;
  std::uint64_t seed = 0;
  std::size_t restarts = 0;
  std::size_t redraws = 0;
  double wall_time_s = 0.0;
};

/// One-sided mean test: reject uniqueness when t_bar_star < q(alpha).
UniquenessReport decide(const BootstrapDraws& draws, double alpha);

/// Standardized mean sum(x) / (s sqrt(m)) with the (m-1) standard deviation;
/// returns false when all values are equal.
bool standardized_mean(const std::vector<double>& values, double& t_bar, double& s);

}  // namespace kmu
