#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kmu/models.hpp"
#include "kmu/rng.hpp"

namespace kmu {

/// Covariance of f_j(X) = min_i ||X - a_i^(j)||^2 across the m catalog
/// minimizers: the covariance of the Brownian bridge restricted to them.
struct MinimizerCovariance {
  std::size_t m = 0;
  std::vector<double> sigma;  // m*m row-major, symmetric
  std::size_t mc_n = 0;
  std::uint64_t seed = 0;
  /// Set when an orbit was replaced by a finite subset of its members.
  bool approximate = false;

  double at(std::size_t i, std::size_t j) const { return sigma[i * m + j]; }
};

/// Monte-Carlo estimate from mc_n fresh draws. Orbit catalogs require
/// orbit_points > 0 members per orbit (equally spaced angles); otherwise
/// UnsupportedError.
MinimizerCovariance estimate_covariance(const ModelSpec& spec, const PopulationCatalog& catalog,
                                        std::size_t mc_n, RngStream stream,
                                        std::size_t orbit_points = 0);

/// Checked covariance from an explicit matrix (validates symmetry/PSD).
MinimizerCovariance make_covariance(std::size_t m, std::vector<double> sigma);

/// Draws N(0, sigma) through the symmetric eigendecomposition. Eigenvalues
/// in [-1e-8, 0) are clipped to zero; anything more negative is a
/// NumericalError.
class GaussianVectorSampler {
 public:
  explicit GaussianVectorSampler(const MinimizerCovariance& cov);

  std::size_t dim() const noexcept { return m_; }
  void draw(Rng& rng, std::vector<double>& out) const;

 private:
  std::size_t m_;
  std::vector<double> factor_;  // m*m row-major, sigma = F F^T
};

struct LimitSummary {
  double mean = 0.0;
  double sd = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  std::size_t n_sim = 0;
  std::vector<double> samples;
};

/// n_sim draws of min_j G_j with G ~ N(0, sigma). Draws are generated in
/// blocks of kLimitBlock with per-block sub-streams; block summaries merge
/// in index order, so results do not depend on `parallelism`.
LimitSummary simulate_T(const MinimizerCovariance& cov, std::size_t n_sim, RngStream stream,
                        bool keep_samples = false, std::size_t parallelism = 1);

inline constexpr std::size_t kLimitBlock = 1 << 16;

}  // namespace kmu
