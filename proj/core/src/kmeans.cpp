#include "kmu/kmeans.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "kmu/error.hpp"
#include "kmu/numeric.hpp"
#include "kmu/parallel.hpp"

namespace kmu {
namespace {

constexpr std::size_t kMaxRounds = 100;
constexpr std::size_t kMaxHartiganSweeps = 100;
// A single-point move must beat the current cost by this relative margin;
// keeps floating-point noise from cycling points between clusters.
constexpr double kMoveMargin = 1e-12;

struct Workspace {
  std::vector<std::uint32_t> assign;
  std::vector<double> mind2;
  std::vector<double> sums;
  std::vector<std::size_t> counts;

  Workspace(std::size_t n, std::size_t k, std::size_t d)
      : assign(n, 0), mind2(n, 0.0), sums(k * d, 0.0), counts(k, 0) {}
};

struct AssignResult {
  double cost = 0.0;  // mean squared distance to the nearest center
  std::size_t changed = 0;
  std::size_t empty = 0;
};

struct RestartResult {
  std::vector<double> centers;
  double cost = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

inline double sq_dist(const double* a, const double* b, std::size_t d) noexcept {
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

// Nearest center with ties going to the lowest index.
inline std::uint32_t nearest(const double* x, const double* centers, std::size_t k, std::size_t d,
                             double& best) noexcept {
  std::uint32_t arg = 0;
  best = sq_dist(x, centers, d);
  for (std::size_t c = 1; c < k; ++c) {
    const double v = sq_dist(x, centers + c * d, d);
    if (v < best) {
      best = v;
      arg = static_cast<std::uint32_t>(c);
    }
  }
  return arg;
}

AssignResult assign_nearest(const Dataset& data, const std::vector<double>& centers, std::size_t k,
                            Workspace& ws) {
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  const double* x = data.values().data();
  AssignResult out;
  // Plain accumulation: this value only drives the stopping rule. The
  // reported WCSS is recomputed with compensated summation.
  double total = 0.0;
  std::fill(ws.counts.begin(), ws.counts.end(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    double best;
    const std::uint32_t c = nearest(x + i * d, centers.data(), k, d, best);
    if (c != ws.assign[i]) {
      ws.assign[i] = c;
      ++out.changed;
    }
    ws.mind2[i] = best;
    ++ws.counts[c];
    total += best;
  }
  out.cost = total / static_cast<double>(n);
  out.empty = static_cast<std::size_t>(std::count(ws.counts.begin(), ws.counts.end(), 0));
  return out;
}

void clamp_to_ball(std::vector<double>& centers, std::size_t d, double radius) {
  for (std::size_t c = 0; c * d < centers.size(); ++c) {
    double* p = centers.data() + c * d;
    double norm2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) norm2 += p[j] * p[j];
    if (norm2 > radius * radius) {
      const double s = radius / std::sqrt(norm2);
      for (std::size_t j = 0; j < d; ++j) p[j] *= s;
    }
  }
}

// Centers become the means of the current assignment. An empty cluster
// receives the point farthest from the mean of its (multi-point) cluster.
void update_centers(const Dataset& data, std::size_t k, Workspace& ws,
                    std::vector<double>& centers) {
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  const double* x = data.values().data();

  std::fill(ws.sums.begin(), ws.sums.end(), 0.0);
  std::fill(ws.counts.begin(), ws.counts.end(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = ws.assign[i];
    ++ws.counts[c];
    const double* xi = x + i * d;
    double* s = ws.sums.data() + c * d;
    for (std::size_t j = 0; j < d; ++j) s[j] += xi[j];
  }

  auto recompute = [&](std::size_t c) {
    const double inv = 1.0 / static_cast<double>(ws.counts[c]);
    for (std::size_t j = 0; j < d; ++j) centers[c * d + j] = ws.sums[c * d + j] * inv;
  };
  for (std::size_t c = 0; c < k; ++c) {
    if (ws.counts[c] > 0) recompute(c);
  }

  for (std::size_t c = 0; c < k; ++c) {
    if (ws.counts[c] > 0) continue;
    std::size_t far = n;
    double far_d2 = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t a = ws.assign[i];
      if (ws.counts[a] < 2) continue;
      const double v = sq_dist(x + i * d, centers.data() + a * d, d);
      if (v > far_d2) {
        far_d2 = v;
        far = i;
      }
    }
    if (far == n || far_d2 <= 0.0) {
      throw InfeasibleError("cannot fill an empty cluster: too few distinct observations");
    }
    const std::size_t donor = ws.assign[far];
    const double* xf = x + far * d;
    for (std::size_t j = 0; j < d; ++j) {
      ws.sums[donor * d + j] -= xf[j];
      ws.sums[c * d + j] = xf[j];
    }
    --ws.counts[donor];
    ws.counts[c] = 1;
    ws.assign[far] = static_cast<std::uint32_t>(c);
    recompute(donor);
    recompute(c);
  }
}

// Hartigan-style pass: move single points between clusters while the move
// lowers the within-cluster sum of squares. `centers` must hold exact means.
std::size_t hartigan_pass(const Dataset& data, std::size_t k, Workspace& ws,
                          std::vector<double>& centers) {
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  const double* x = data.values().data();
  std::size_t total_moves = 0;

  for (std::size_t sweep = 0; sweep < kMaxHartiganSweeps; ++sweep) {
    std::size_t moves = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t a = ws.assign[i];
      const std::size_t na = ws.counts[a];
      if (na < 2) continue;
      const double* xi = x + i * d;
      const double remove_gain = static_cast<double>(na) / static_cast<double>(na - 1) *
                                 sq_dist(xi, centers.data() + a * d, d);
      std::size_t best = a;
      double best_cost = remove_gain;
      for (std::size_t b = 0; b < k; ++b) {
        if (b == a) continue;
        const double nb = static_cast<double>(ws.counts[b]);
        const double add_cost = nb / (nb + 1.0) * sq_dist(xi, centers.data() + b * d, d);
        if (add_cost < best_cost) {
          best_cost = add_cost;
          best = b;
        }
      }
      if (best == a || !(best_cost < remove_gain * (1.0 - kMoveMargin))) continue;

      const double fa = static_cast<double>(na);
      const double fb = static_cast<double>(ws.counts[best]);
      double* ca = centers.data() + a * d;
      double* cb = centers.data() + best * d;
      for (std::size_t j = 0; j < d; ++j) {
        ca[j] = (fa * ca[j] - xi[j]) / (fa - 1.0);
        cb[j] = (fb * cb[j] + xi[j]) / (fb + 1.0);
      }
      --ws.counts[a];
      ++ws.counts[best];
      ws.assign[i] = static_cast<std::uint32_t>(best);
      ++moves;
    }
    total_moves += moves;
    if (moves == 0) break;
  }
  return total_moves;
}

std::vector<double> kmeanspp(const Dataset& data, std::size_t k, Rng& rng, Workspace& ws) {
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  const double* x = data.values().data();
  std::vector<double> centers(k * d);

  const std::size_t first = rng.below(n);
  std::copy_n(x + first * d, d, centers.begin());
  for (std::size_t i = 0; i < n; ++i) ws.mind2[i] = sq_dist(x + i * d, centers.data(), d);

  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += ws.mind2[i];
    const double target = rng.uniform() * total;
    std::size_t pick = n;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cumulative += ws.mind2[i];
      if (cumulative > target) {
        pick = i;
        break;
      }
    }
    if (pick == n) {
      // Rounding left the target beyond the last partial sum: take the last
      // point with positive weight.
      for (std::size_t i = n; i-- > 0;) {
        if (ws.mind2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    }
    std::copy_n(x + pick * d, d, centers.begin() + static_cast<std::ptrdiff_t>(c * d));
    const double* cc = centers.data() + c * d;
    for (std::size_t i = 0; i < n; ++i) {
      ws.mind2[i] = std::min(ws.mind2[i], sq_dist(x + i * d, cc, d));
    }
  }
  return centers;
}

RestartResult run_restart(const Dataset& data, std::size_t k, std::vector<double> centers,
                          const FitOptions& options, Workspace& ws) {
  RestartResult out;
  const std::size_t d = data.dim();
  const bool use_hartigan = options.hartigan && !options.clamp_radius;
  if (options.clamp_radius) clamp_to_ball(centers, d, *options.clamp_radius);

  for (std::size_t round = 0; round < kMaxRounds; ++round) {
    AssignResult ar = assign_nearest(data, centers, k, ws);
    if (options.record_trace) out.trace.push_back(ar.cost);

    bool converged = false;
    std::size_t it = 0;
    while (it < options.max_iters) {
      update_centers(data, k, ws, centers);
      if (options.clamp_radius) clamp_to_ball(centers, d, *options.clamp_radius);
      const double previous = ar.cost;
      ar = assign_nearest(data, centers, k, ws);
      ++it;
      if (options.record_trace) out.trace.push_back(ar.cost);
      if (ar.changed == 0) {
        converged = true;
        break;
      }
      if (ar.empty == 0 && std::fabs(previous - ar.cost) <= options.tol * previous) {
        converged = true;
        break;
      }
    }
    out.iterations += it;
    out.converged = converged;

    update_centers(data, k, ws, centers);
    if (options.clamp_radius) clamp_to_ball(centers, d, *options.clamp_radius);
    if (!use_hartigan) break;
    if (hartigan_pass(data, k, ws, centers) == 0) break;
    update_centers(data, k, ws, centers);
  }

  AssignResult ar = assign_nearest(data, centers, k, ws);
  for (std::size_t guard = 0; ar.empty > 0 && guard < k; ++guard) {
    update_centers(data, k, ws, centers);
    ar = assign_nearest(data, centers, k, ws);
  }
  if (options.record_trace) out.trace.push_back(ar.cost);
  out.cost = ar.cost;
  out.centers = std::move(centers);
  return out;
}

}  // namespace

double objective(const Dataset& data, const CenterSet& centers) {
  if (data.dim() != centers.dim()) throw ShapeError("objective: dimension mismatch");
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  const double* x = data.values().data();
  const double* c = centers.coords().data();
  CompensatedSum total;
  for (std::size_t i = 0; i < n; ++i) {
    double best;
    nearest(x + i * d, c, centers.size(), d, best);
    total.add(best);
  }
  return total.value() / static_cast<double>(n);
}

std::size_t count_distinct_rows(const Dataset& data, std::size_t limit) {
  std::vector<std::size_t> seen;
  for (std::size_t i = 0; i < data.size() && seen.size() < limit; ++i) {
    const auto row = data.row(i);
    const bool known = std::any_of(seen.begin(), seen.end(), [&](std::size_t s) {
      const auto other = data.row(s);
      return std::equal(row.begin(), row.end(), other.begin());
    });
    if (!known) seen.push_back(i);
  }
  return seen.size();
}

KMeansFit fit(const Dataset& data, std::size_t k, std::size_t restarts, RngStream stream,
              const FitOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (k == 0) throw ParameterError("k must be at least 1");
  if (restarts == 0) throw ParameterError("restarts must be at least 1");
  if (options.max_iters == 0) throw ParameterError("max_iters must be at least 1");
  if (!(options.tol >= 0.0)) throw ParameterError("tol must be non-negative");
  if (options.clamp_radius && !(*options.clamp_radius > 0.0)) {
    throw ParameterError("clamp radius must be positive");
  }
  if (count_distinct_rows(data, k) < k) {
    throw InfeasibleError("k exceeds the number of distinct observations");
  }
  if (options.warm_start) {
    if (options.warm_start->size() != k) throw ParameterError("warm start must have k centers");
    if (options.warm_start->dim() != data.dim()) throw ShapeError("warm start dimension mismatch");
  }

  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  std::vector<RestartResult> results(restarts);
  parallel_for(restarts, options.parallelism, [&](std::size_t r) {
    Workspace ws(n, k, d);
    std::vector<double> init;
    if (r == 0 && options.warm_start) {
      const auto c = options.warm_start->coords();
      init.assign(c.begin(), c.end());
    } else {
      Rng rng(stream.split(r));
      init = kmeanspp(data, k, rng, ws);
    }
    results[r] = run_restart(data, k, std::move(init), options, ws);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < restarts; ++r) {
    if (results[r].cost < results[best].cost) best = r;
  }

  KMeansFit out{.centers = CenterSet(k, d, std::move(results[best].centers))};
  out.assignments.resize(n);
  const double* x = data.values().data();
  const double* c = out.centers.coords().data();
  for (std::size_t i = 0; i < n; ++i) {
    double dist;
    out.assignments[i] = nearest(x + i * d, c, k, d, dist);
  }
  out.wcss = objective(data, out.centers);
  out.restarts_used = restarts;
  out.best_restart = best;
  out.iterations = results[best].iterations;
  out.converged = results[best].converged;
  out.trace = std::move(results[best].trace);
  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

double wcss(const Dataset& data, std::size_t k, std::size_t restarts, RngStream stream,
            const FitOptions& options) {
  return fit(data, k, restarts, stream, options).wcss;
}

}  // namespace kmu
