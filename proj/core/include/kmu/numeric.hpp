#pragma once

#include <cmath>
#include <cstddef>

namespace kmu {

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Streaming central moments up to order four, mergeable with the exact
/// pairwise update formulas (Chan et al. / Pebay).
class Moments {
 public:
  void add(double x) noexcept;
  void merge(const Moments& other) noexcept;

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased (n-1) variance.
  double variance() const noexcept;
  double sd() const noexcept { return std::sqrt(variance()); }
  /// Population skewness g1.
  double skewness() const noexcept;
  /// Population excess kurtosis g2.
  double excess_kurtosis() const noexcept;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
  double m4_ = 0.0;
};

/// Standard normal CDF, via erfc (absolute error near machine epsilon).
double normal_cdf(double x) noexcept;

double normal_pdf(double x) noexcept;

/// Inverse standard normal CDF: Acklam's rational approximation followed by
/// one Halley step against normal_cdf. Throws ParameterError unless
/// 0 < alpha < 1.
double normal_quantile(double alpha);

}  // namespace kmu
