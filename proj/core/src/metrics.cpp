#include "kmu/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kmu/error.hpp"

namespace kmu {
namespace {

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

// max over a in A of min over b in B of ||a - b||
double directed(const FiniteMetricCloud& a, const FiniteMetricCloud& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      best = std::min(best, squared_distance(a.point(i), b.point(j)));
    }
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

std::vector<double> distance_matrix(const FiniteMetricCloud& c) {
  const std::size_t m = c.size();
  std::vector<double> out(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      out[i * m + j] = out[j * m + i] = distance(c.point(i), c.point(j));
    }
  }
  return out;
}

// Exhaustive search over correspondences R (subsets of A x B covering both
// sides), minimizing max |d_A(a, a') - d_B(b, b')| over pairs in R. Cells are
// decided in order; a branch stops once its distortion reaches the best
// complete correspondence found so far.
class CorrespondenceSearch {
 public:
  CorrespondenceSearch(const FiniteMetricCloud& a, const FiniteMetricCloud& b)
      : ma_(a.size()), mb_(b.size()), cells_(ma_ * mb_) {
    const auto da = distance_matrix(a);
    const auto db = distance_matrix(b);
    pair_distortion_.assign(cells_ * cells_, 0.0);
    for (std::size_t p = 0; p < cells_; ++p) {
      for (std::size_t q = 0; q < cells_; ++q) {
        const std::size_t i = p / mb_, j = p % mb_, i2 = q / mb_, j2 = q % mb_;
        pair_distortion_[p * cells_ + q] = std::fabs(da[i * ma_ + i2] - db[j * mb_ + j2]);
      }
    }
  }

  double run() {
    best_ = std::numeric_limits<double>::infinity();
    chosen_.clear();
    search(0, 0.0, 0, 0);
    return best_;
  }

 private:
  void search(std::size_t cell, double current, unsigned rows, unsigned cols) {
    if (current >= best_) return;
    const unsigned all_rows = (1u << ma_) - 1u;
    const unsigned all_cols = (1u << mb_) - 1u;
    if (rows == all_rows && cols == all_cols) {
      // Adding further cells cannot lower the distortion.
      best_ = current;
      return;
    }
    if (cell == cells_) return;

    const std::size_t i = cell / mb_, j = cell % mb_;
    double with = current;
    for (std::size_t q : chosen_) with = std::max(with, pair_distortion_[cell * cells_ + q]);
    chosen_.push_back(cell);
    search(cell + 1, with, rows | (1u << i), cols | (1u << j));
    chosen_.pop_back();

    // Skipping the cell is only viable if row i and column j can still be
    // covered by later cells.
    const bool row_open = (rows & (1u << i)) == 0 && j + 1 == mb_;
    const bool col_open = (cols & (1u << j)) == 0 && i + 1 == ma_;
    if (!row_open && !col_open) search(cell + 1, current, rows, cols);
  }

  std::size_t ma_, mb_, cells_;
  std::vector<double> pair_distortion_;
  std::vector<std::size_t> chosen_;
  double best_ = 0.0;
};

}  // namespace

FiniteMetricCloud::FiniteMetricCloud(std::size_t m, std::size_t d, std::vector<double> coords)
    : m_(m), d_(d), coords_(std::move(coords)) {
  if (m == 0 || d == 0) throw ShapeError("metric cloud must contain at least one point");
  if (coords_.size() != m * d) throw ShapeError("cloud coordinates do not match m * d");
  for (double v : coords_) {
    if (!std::isfinite(v)) throw ShapeError("cloud contains a non-finite coordinate");
  }
}

FiniteMetricCloud::FiniteMetricCloud(const CenterSet& centers)
    : FiniteMetricCloud(centers.size(), centers.dim(),
                        std::vector<double>(centers.coords().begin(), centers.coords().end())) {}

FiniteMetricCloud FiniteMetricCloud::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ShapeError("metric cloud must contain at least one point");
  const std::size_t d = rows.front().size();
  std::vector<double> coords;
  for (const auto& r : rows) {
    if (r.size() != d) throw ShapeError("cloud rows have differing dimensions");
    coords.insert(coords.end(), r.begin(), r.end());
  }
  return FiniteMetricCloud(rows.size(), d, std::move(coords));
}

double hausdorff(const FiniteMetricCloud& a, const FiniteMetricCloud& b) {
  if (a.dim() != b.dim()) throw ShapeError("hausdorff: dimension mismatch");
  return std::max(directed(a, b), directed(b, a));
}

double gromov_hausdorff_small(const FiniteMetricCloud& a, const FiniteMetricCloud& b) {
  if (a.size() > kMaxGromovHausdorffPoints || b.size() > kMaxGromovHausdorffPoints) {
    throw UnsupportedError("gromov_hausdorff_small supports at most 4 points per cloud");
  }
  return 0.5 * CorrespondenceSearch(a, b).run();
}

OrbitDistance orbit_distance(const CenterSet& centers, const PopulationCatalog& catalog,
                             std::size_t orbit_grid) {
  if (catalog.entries.empty()) throw ParameterError("orbit_distance: empty catalog");
  if (orbit_grid == 0) throw ParameterError("orbit_distance: orbit_grid must be positive");
  const FiniteMetricCloud fitted(centers);
  OrbitDistance best{std::numeric_limits<double>::infinity(), 0, 0.0};
  for (std::size_t e = 0; e < catalog.entries.size(); ++e) {
    const CatalogEntry& entry = catalog.entries[e];
    if (!entry.is_orbit()) {
      const double dist = hausdorff(fitted, *entry.centers);
      if (dist < best.distance) best = {dist, e, 0.0};
      continue;
    }
    for (std::size_t t = 0; t < orbit_grid; ++t) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(t) /
                           static_cast<double>(orbit_grid);
      const double dist = hausdorff(fitted, entry.orbit(angle));
      if (dist < best.distance) best = {dist, e, angle};
    }
  }
  return best;
}

}  // namespace kmu
