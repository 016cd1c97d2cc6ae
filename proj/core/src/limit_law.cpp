#include "kmu/limit_law.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kmu/error.hpp"
#include "kmu/numeric.hpp"
#include "kmu/parallel.hpp"

namespace kmu {
namespace {

constexpr double kEigenClip = 1e-8;

}  // namespace

MinimizerCovariance make_covariance(std::size_t m, std::vector<double> sigma) {
  if (m == 0) throw ParameterError("covariance needs at least one minimizer");
  if (sigma.size() != m * m) throw ShapeError("covariance matrix is not m x m");
  double scale = 0.0;
  for (double v : sigma) {
    if (!std::isfinite(v)) throw NumericalError("covariance has a non-finite entry");
    scale = std::max(scale, std::fabs(v));
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (sigma[i * m + i] < 0.0) throw NumericalError("covariance has a negative variance");
    for (std::size_t j = 0; j < i; ++j) {
      if (std::fabs(sigma[i * m + j] - sigma[j * m + i]) > 1e-12 * std::max(scale, 1.0)) {
        throw NumericalError("covariance matrix is not symmetric");
      }
    }
  }
  MinimizerCovariance cov;
  cov.m = m;
  cov.sigma = std::move(sigma);
  return cov;
}

MinimizerCovariance estimate_covariance(const ModelSpec& spec, const PopulationCatalog& catalog,
                                        std::size_t mc_n, RngStream stream,
                                        std::size_t orbit_points) {
  if (mc_n < 2) throw ParameterError("mc_n must be at least 2");
  std::vector<CenterSet> sets;
  bool approximate = false;
  for (const auto& entry : catalog.entries) {
    if (!entry.is_orbit()) {
      sets.push_back(*entry.centers);
      continue;
    }
    if (orbit_points == 0) {
      throw UnsupportedError("catalog contains a continuum of minimizers; pass orbit_points");
    }
    approximate = true;
    for (std::size_t t = 0; t < orbit_points; ++t) {
      sets.push_back(entry.orbit(2.0 * std::numbers::pi * static_cast<double>(t) /
                                 static_cast<double>(orbit_points)));
    }
  }
  if (sets.empty()) throw UnsupportedError("catalog is empty");
  for (const auto& s : sets) {
    if (s.dim() != spec.dim) throw ShapeError("catalog dimension does not match the model");
  }

  const std::size_t m = sets.size();
  std::vector<double> mean(m, 0.0), comoment(m * m, 0.0), f(m), delta(m);
  std::size_t count = 0;
  constexpr std::size_t kBlock = 1 << 16;
  for (std::size_t block = 0, done = 0; done < mc_n; ++block) {
    const std::size_t len = std::min(kBlock, mc_n - done);
    const Dataset draws = sample(spec, len, stream.split(block));
    for (std::size_t i = 0; i < len; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < sets[j].size(); ++c) {
          best = std::min(best, squared_distance(draws.row(i), sets[j].center(c)));
        }
        f[j] = best;
      }
      ++count;
      const double inv = 1.0 / static_cast<double>(count);
      for (std::size_t j = 0; j < m; ++j) {
        delta[j] = f[j] - mean[j];
        mean[j] += delta[j] * inv;
      }
      for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) comoment[a * m + b] += delta[a] * (f[b] - mean[b]);
      }
    }
    done += len;
  }

  std::vector<double> sigma(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      // Symmetrize: the two triangles differ only by rounding.
      sigma[a * m + b] =
          0.5 * (comoment[a * m + b] + comoment[b * m + a]) / static_cast<double>(count - 1);
    }
  }
  MinimizerCovariance cov = make_covariance(m, std::move(sigma));
  cov.mc_n = mc_n;
  cov.seed = stream.key();
  cov.approximate = approximate;
  return cov;
}

GaussianVectorSampler::GaussianVectorSampler(const MinimizerCovariance& cov) : m_(cov.m) {
  if (cov.m == 0 || cov.sigma.size() != cov.m * cov.m) {
    throw ShapeError("covariance matrix is not m x m");
  }
  Eigen::MatrixXd sigma(m_, m_);
  for (std::size_t i = 0; i < m_; ++i) {
    for (std::size_t j = 0; j < m_; ++j) sigma(i, j) = cov.at(i, j);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  Eigen::VectorXd values = solver.eigenvalues();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) < -kEigenClip) {
      throw NumericalError("covariance is not positive semi-definite");
    }
    values(i) = std::sqrt(std::max(values(i), 0.0));
  }
  const Eigen::MatrixXd factor = solver.eigenvectors() * values.asDiagonal();
  factor_.resize(m_ * m_);
  for (std::size_t i = 0; i < m_; ++i) {
    for (std::size_t j = 0; j < m_; ++j) factor_[i * m_ + j] = factor(i, j);
  }
}

void GaussianVectorSampler::draw(Rng& rng, std::vector<double>& out) const {
  thread_local std::vector<double> z;
  z.resize(m_);
  for (auto& v : z) v = rng.normal();
  out.assign(m_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m_; ++j) s += factor_[i * m_ + j] * z[j];
    out[i] = s;
  }
}

LimitSummary simulate_T(const MinimizerCovariance& cov, std::size_t n_sim, RngStream stream,
                        bool keep_samples, std::size_t parallelism) {
  if (n_sim < 2) throw ParameterError("n_sim must be at least 2");
  const GaussianVectorSampler sampler(cov);
  const std::size_t blocks = (n_sim + kLimitBlock - 1) / kLimitBlock;
  std::vector<Moments> block_moments(blocks);
  std::vector<std::vector<double>> block_samples(keep_samples ? blocks : 0);

  parallel_for(blocks, parallelism, [&](std::size_t b) {
    const std::size_t begin = b * kLimitBlock;
    const std::size_t len = std::min(kLimitBlock, n_sim - begin);
    Rng rng(stream.split(b));
    std::vector<double> g;
    Moments local;
    if (keep_samples) block_samples[b].reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
      sampler.draw(rng, g);
      const double t = *std::min_element(g.begin(), g.end());
      local.add(t);
      if (keep_samples) block_samples[b].push_back(t);
    }
    block_moments[b] = local;
  });

  Moments total;
  for (const auto& m : block_moments) total.merge(m);
  LimitSummary out;
  out.mean = total.mean();
  out.sd = total.sd();
  out.skewness = total.skewness();
  out.excess_kurtosis = total.excess_kurtosis();
  out.n_sim = n_sim;
  if (keep_samples) {
    out.samples.reserve(n_sim);
    for (auto& s : block_samples) out.samples.insert(out.samples.end(), s.begin(), s.end());
  }
  return out;
}

}  // namespace kmu
