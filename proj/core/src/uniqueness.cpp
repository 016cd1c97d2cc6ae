#include "kmu/uniqueness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "kmu/error.hpp"
#include "kmu/numeric.hpp"
#include "kmu/parallel.hpp"

namespace kmu {
namespace {

Dataset resample(const Dataset& data, Rng& rng) {
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  std::vector<double> values(n * d);
  const double* x = data.values().data();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = rng.below(n);
    std::copy_n(x + src * d, d, values.begin() + static_cast<std::ptrdiff_t>(i * d));
  }
  return Dataset(n, d, std::move(values));
}

}  // namespace

BootstrapDraws bootstrap_draws(const Dataset& data, std::size_t k, std::size_t B,
                               std::size_t restarts, RngStream stream,
                               const BootstrapOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (B < 2) throw ParameterError("B must be at least 2");

  const KMeansFit base = fit(data, k, restarts, stream.split(0), options.fit);
  const double root_n = std::sqrt(static_cast<double>(data.size()));

  FitOptions boot_options = options.fit;
  boot_options.parallelism = 1;
  boot_options.record_trace = false;
  if (options.warm_start) {
    boot_options.warm_start = base.centers;
  } else {
    boot_options.warm_start.reset();
  }

  std::vector<double> t_star(B);
  std::vector<std::size_t> redraws(B, 0);
  parallel_for(B, options.parallelism, [&](std::size_t b) {
    const RngStream draw_stream = stream.split(b + 1);
    for (std::size_t attempt = 0;; ++attempt) {
      Rng rng(draw_stream.split(0).split(attempt));
      Dataset boot = resample(data, rng);
      if (count_distinct_rows(boot, k) >= k) {
        const double w = fit(boot, k, restarts, draw_stream.split(1), boot_options).wcss;
        t_star[b] = root_n * (w - base.wcss);
        return;
      }
      if (attempt == options.max_redraws) {
        throw NumericalError("bootstrap draw " + std::to_string(b) +
                             " never produced k distinct rows");
      }
      ++redraws[b];
    }
  });

  BootstrapDraws out;
  out.t_star = std::move(t_star);
  out.base_wcss = base.wcss;
  out.n = data.size();
  out.d = data.dim();
  out.k = k;
  out.B = B;
  out.restarts = restarts;
  out.seed = stream.key();
  for (std::size_t r : redraws) out.redraws += r;
  out.base_fit_time_s = base.wall_time_s;
  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

bool standardized_mean(const std::vector<double>& values, double& t_bar, double& s) {
  const std::size_t m = values.size();
  if (m < 2) throw ParameterError("standardized mean needs at least two values");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) {
    t_bar = 0.0;
    s = 0.0;
    return false;
  }
  CompensatedSum sum;
  for (double v : values) sum.add(v);
  const double mean = sum.value() / static_cast<double>(m);
  CompensatedSum squares;
  for (double v : values) squares.add((v - mean) * (v - mean));
  s = std::sqrt(squares.value() / static_cast<double>(m - 1));
  t_bar = sum.value() / (s * std::sqrt(static_cast<double>(m)));
  return true;
}

UniquenessReport decide(const BootstrapDraws& draws, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  if (draws.t_star.size() < 2) throw ParameterError("decide needs at least two bootstrap draws");

  UniquenessReport report;
  report.n = draws.n;
  report.d = draws.d;
  report.k = draws.k;
  report.B = draws.t_star.size();
  report.alpha = alpha;
  report.base_wcss = draws.base_wcss;
  report.threshold = normal_quantile(alpha);
  report.degenerate = !standardized_mean(draws.t_star, report.t_bar_star, report.s_star);
  report.reject = !report.degenerate && report.t_bar_star < report.threshold;
  report.seed = draws.seed;
  report.restarts = draws.restarts;
  report.redraws = draws.redraws;
  report.wall_time_s = draws.wall_time_s;
  return report;
}

}  // namespace kmu
