#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kmu/error.hpp"
#include "kmu/limit_law.hpp"
#include "kmu/models.hpp"
#include "kmu/numeric.hpp"

using namespace kmu;

namespace {

double band(const LimitSummary& s) { return 4.0 * s.sd / std::sqrt(static_cast<double>(s.n_sim)); }

}  // namespace

TEST(Covariance, Validation) {
  EXPECT_THROW(make_covariance(2, {1.0, 0.5, 0.4, 1.0}), NumericalError);
  EXPECT_THROW(make_covariance(2, {1.0, 0.0, 0.0}), ShapeError);
  EXPECT_THROW(GaussianVectorSampler(make_covariance(2, {1.0, 2.0, 2.0, 1.0})), NumericalError);
  // Eigenvalue -1e-10 is clipped.
  EXPECT_NO_THROW(GaussianVectorSampler(make_covariance(2, {1.0, 1.0 + 1e-10, 1.0 + 1e-10, 1.0})));
}

TEST(Covariance, SamplerReproducesSigma) {
  const auto cov = make_covariance(3, {2.0, 0.6, -0.3, 0.6, 1.0, 0.2, -0.3, 0.2, 0.5});
  GaussianVectorSampler sampler(cov);
  Rng rng(RngStream(4));
  std::vector<double> g, acc(9, 0.0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    sampler.draw(rng, g);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) acc[a * 3 + b] += g[a] * g[b];
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const double se = std::sqrt((cov.at(a, a) * cov.at(b, b) + cov.at(a, b) * cov.at(a, b)) / n);
      EXPECT_NEAR(acc[a * 3 + b] / n, cov.at(a, b), 4 * se);
    }
}

TEST(SimulateT, SingleMinimizerIsStandardNormal) {
  const auto s = simulate_T(make_covariance(1, {1.0}), 1'000'000, RngStream(1));
  EXPECT_EQ(s.n_sim, 1'000'000u);
  EXPECT_NEAR(s.mean, 0.0, band(s));
  EXPECT_NEAR(s.sd, 1.0, 0.005);
  const double n = static_cast<double>(s.n_sim);
  EXPECT_NEAR(s.skewness, 0.0, 4 * std::sqrt(6.0 / n));
  EXPECT_NEAR(s.excess_kurtosis, 0.0, 4 * std::sqrt(24.0 / n));
}

TEST(SimulateT, IndependentPairMeanIsMinusOneOverRootPi) {
  const auto s = simulate_T(make_covariance(2, {1.0, 0.0, 0.0, 1.0}), 1'000'000, RngStream(2));
  EXPECT_NEAR(s.mean, -1.0 / std::sqrt(std::numbers::pi), band(s));
}

TEST(SimulateT, DuplicatedMinimizerCollapses) {
  const auto s = simulate_T(make_covariance(2, {1.0, 1.0, 1.0, 1.0}), 200000, RngStream(3));
  EXPECT_NEAR(s.mean, 0.0, band(s));
  EXPECT_NEAR(s.sd, 1.0, 0.01);
}

TEST(SimulateT, MoreMinimizersLowerTheMean) {
  // The first two coordinates of a draw from the 3x3 matrix are a draw from
  // its leading 2x2 block, so both minima share the same noise.
  const auto three = make_covariance(3, {1.0, 0.3, 0.1, 0.3, 1.0, 0.3, 0.1, 0.3, 1.0});
  GaussianVectorSampler sampler(three);
  Rng rng(RngStream(5));
  std::vector<double> g;
  Moments min2, min3;
  for (int i = 0; i < 400000; ++i) {
    sampler.draw(rng, g);
    const double m2 = std::min(g[0], g[1]);
    const double m3 = std::min(m2, g[2]);
    ASSERT_LE(m3, m2);
    min2.add(m2);
    min3.add(m3);
  }
  EXPECT_LT(min3.mean(), min2.mean());
  const auto direct = simulate_T(make_covariance(2, {1.0, 0.3, 0.3, 1.0}), 400000, RngStream(6));
  EXPECT_NEAR(min2.mean(), direct.mean, 4 * std::hypot(min2.sd(), direct.sd) / std::sqrt(400000.0));
}

TEST(SimulateT, KeepsSamplesAndIgnoresParallelism) {
  const auto cov = make_covariance(2, {1.0, 0.2, 0.2, 2.0});
  const auto a = simulate_T(cov, 150000, RngStream(6), true, 1);
  const auto b = simulate_T(cov, 150000, RngStream(6), true, 3);
  ASSERT_EQ(a.samples.size(), 150000u);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.sd, b.sd);
  EXPECT_THROW(simulate_T(cov, 1, RngStream(1)), ParameterError);
}

TEST(EstimateCovariance, UniqueCatalogIsScalar) {
  const ModelSpec spec = ModelSpec::make(Family::C2k2_2);
  const auto cov = estimate_covariance(spec, population_catalog(spec), 100000, RngStream(7));
  EXPECT_EQ(cov.m, 1u);
  EXPECT_GT(cov.at(0, 0), 0.0);
  EXPECT_FALSE(cov.approximate);
}

TEST(EstimateCovariance, MirrorSymmetricDnu) {
  const ModelSpec spec = ModelSpec::make(Family::UrC3k2, 0.1);
  const std::size_t n = 400000;
  const auto cov = estimate_covariance(spec, population_catalog(spec), n, RngStream(8));
  ASSERT_EQ(cov.m, 2u);
  // Var of a variance estimate is about (m4 - s^4)/n; bound it by 3 s^2 sqrt(2/n) per entry.
  const double se = 3.0 * cov.at(0, 0) * std::sqrt(2.0 / n);
  EXPECT_NEAR(cov.at(0, 0), cov.at(1, 1), 3 * se);
  EXPECT_LT(cov.at(0, 1), std::sqrt(cov.at(0, 0) * cov.at(1, 1)) * (1 - 1e-6));
}

TEST(EstimateCovariance, RotationSymmetricTC3k2) {
  const ModelSpec spec = ModelSpec::make(Family::TC3k2);
  const std::size_t n = 400000;
  const auto cov = estimate_covariance(spec, population_catalog(spec), n, RngStream(9));
  ASSERT_EQ(cov.m, 3u);
  const double scale = cov.at(0, 0);
  const double se = 3.0 * scale * std::sqrt(2.0 / n);
  EXPECT_NEAR(cov.at(0, 0), cov.at(1, 1), 3 * se);
  EXPECT_NEAR(cov.at(1, 1), cov.at(2, 2), 3 * se);
  EXPECT_NEAR(cov.at(0, 1), cov.at(0, 2), 3 * se);
  EXPECT_NEAR(cov.at(0, 2), cov.at(1, 2), 3 * se);
}

TEST(EstimateCovariance, OrbitsNeedMembers) {
  const ModelSpec spec = ModelSpec::make(Family::C1k2);
  const auto cat = population_catalog(spec);
  EXPECT_THROW(estimate_covariance(spec, cat, 1000, RngStream(1)), UnsupportedError);
  const auto cov = estimate_covariance(spec, cat, 20000, RngStream(1), 8);
  EXPECT_EQ(cov.m, 8u);
  EXPECT_TRUE(cov.approximate);
  const auto s = simulate_T(cov, 100000, RngStream(2));
  EXPECT_LT(s.mean + band(s), 0.0);
}
