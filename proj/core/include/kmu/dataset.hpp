#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kmu {

/// n observations in d dimensions, stored row-major. All entries finite,
/// n >= 1 and d >= 1.
class Dataset {
 public:
  Dataset(std::size_t n, std::size_t d, std::vector<double> values);

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * d_, d_};
  }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> values_;
};

/// Unordered set of k pairwise-distinct centers in d dimensions. Centers are
/// kept in canonical (lexicographic) order so that equal sets compare equal.
class CenterSet {
 public:
  /// `coords` is k*d row-major. Reorders canonically; throws ShapeError on
  /// size mismatch and NumericalError if two centers coincide.
  CenterSet(std::size_t k, std::size_t d, std::vector<double> coords);

  static CenterSet from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return k_; }
  std::size_t dim() const noexcept { return d_; }

  std::span<const double> center(std::size_t i) const noexcept {
    return {coords_.data() + i * d_, d_};
  }
  std::span<const double> coords() const noexcept { return coords_; }

  /// Copy with every center zero-padded to `dim` coordinates.
  CenterSet padded(std::size_t dim) const;

  friend bool operator==(const CenterSet&, const CenterSet&) = default;

 private:
  std::size_t k_;
  std::size_t d_;
  std::vector<double> coords_;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

}  // namespace kmu
