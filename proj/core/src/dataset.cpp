#include "kmu/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kmu/error.hpp"

namespace kmu {

Dataset::Dataset(std::size_t n, std::size_t d, std::vector<double> values)
    : n_(n), d_(d), values_(std::move(values)) {
  if (n == 0 || d == 0) throw ShapeError("dataset must have at least one row and one column");
  if (values_.size() != n * d) throw ShapeError("dataset values do not match n * d");
  for (double v : values_) {
    if (!std::isfinite(v)) throw ShapeError("dataset contains a non-finite value");
  }
}

CenterSet::CenterSet(std::size_t k, std::size_t d, std::vector<double> coords) : k_(k), d_(d) {
  if (k == 0 || d == 0) throw ShapeError("center set must have at least one center");
  if (coords.size() != k * d) throw ShapeError("center coordinates do not match k * d");
  for (double v : coords) {
    if (!std::isfinite(v)) throw ShapeError("center set contains a non-finite value");
  }

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  auto row = [&](std::size_t i) { return coords.begin() + static_cast<std::ptrdiff_t>(i * d); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(row(a), row(a) + static_cast<std::ptrdiff_t>(d), row(b),
                                        row(b) + static_cast<std::ptrdiff_t>(d));
  });

  coords_.reserve(k * d);
  for (std::size_t i : order) coords_.insert(coords_.end(), row(i), row(i) + static_cast<std::ptrdiff_t>(d));

  for (std::size_t i = 1; i < k; ++i) {
    if (std::equal(coords_.begin() + static_cast<std::ptrdiff_t>((i - 1) * d),
                   coords_.begin() + static_cast<std::ptrdiff_t>(i * d),
                   coords_.begin() + static_cast<std::ptrdiff_t>(i * d))) {
      throw NumericalError("center set contains coincident centers");
    }
  }
}

CenterSet CenterSet::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ShapeError("center set must have at least one center");
  const std::size_t d = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * d);
  for (const auto& r : rows) {
    if (r.size() != d) throw ShapeError("center rows have differing dimensions");
    coords.insert(coords.end(), r.begin(), r.end());
  }
  return CenterSet(rows.size(), d, std::move(coords));
}

CenterSet CenterSet::padded(std::size_t dim) const {
  if (dim < d_) throw ShapeError("cannot pad a center set to a smaller dimension");
  std::vector<double> out(k_ * dim, 0.0);
  for (std::size_t i = 0; i < k_; ++i) {
    std::copy_n(coords_.begin() + static_cast<std::ptrdiff_t>(i * d_), d_,
                out.begin() + static_cast<std::ptrdiff_t>(i * dim));
  }
  return CenterSet(k_, dim, std::move(out));
}

}  // namespace kmu
