#include <gtest/gtest.h>

#include <cmath>

#include "kmu/error.hpp"
#include "kmu/models.hpp"
#include "kmu/numeric.hpp"
#include "kmu/uniqueness.hpp"

using namespace kmu;

namespace {

BootstrapDraws synthetic(std::vector<double> t) {
  BootstrapDraws d;
  d.B = t.size();
  d.t_star = std::move(t);
  d.n = 100;
  d.d = 2;
  d.k = 2;
  return d;
}

Dataset transformed(const Dataset& data, double scale, double shift) {
  std::vector<double> v(data.values().begin(), data.values().end());
  for (auto& x : v) x = scale * x + shift;
  return Dataset(data.size(), data.dim(), std::move(v));
}

}  // namespace

TEST(Decide, DegenerateDraws) {
  const auto r = decide(synthetic(std::vector<double>(50, 0.0)), 0.05);
  EXPECT_TRUE(r.degenerate);
  EXPECT_FALSE(r.reject);
  EXPECT_EQ(r.B, 50u);
}

TEST(Decide, ShiftedNormalRejects) {
  Rng rng(RngStream(3));
  std::vector<double> t(1000);
  for (auto& x : t) x = rng.normal() - 0.5;
  const auto r = decide(synthetic(t), 0.05);
  EXPECT_TRUE(r.reject);
  EXPECT_NEAR(r.t_bar_star, -0.5 * std::sqrt(1000.0), 4.0);
  EXPECT_NEAR(r.threshold, -1.6448536269514727, 1e-10);
  EXPECT_NEAR(r.s_star, 1.0, 0.1);
}

TEST(Decide, CalibratedUnderNull) {
  Rng rng(RngStream(4));
  const int runs = 2000;
  int rejections = 0;
  std::vector<double> t(1000);
  for (int run = 0; run < runs; ++run) {
    for (auto& x : t) x = rng.normal();
    rejections += decide(synthetic(t), 0.05).reject ? 1 : 0;
  }
  const double rate = static_cast<double>(rejections) / runs;
  EXPECT_NEAR(rate, 0.05, 3 * std::sqrt(0.05 * 0.95 / runs));
}

TEST(Decide, StatisticDefinition) {
  const auto r = decide(synthetic({1.0, -2.0, 4.0, -7.0}), 0.1);
  // mean -1, sample variance (4 + 1 + 25 + 36) / 3 = 22
  EXPECT_NEAR(r.s_star, std::sqrt(22.0), 1e-14);
  EXPECT_NEAR(r.t_bar_star, -4.0 / (std::sqrt(22.0) * 2.0), 1e-14);
  EXPECT_FALSE(r.reject);
  EXPECT_NEAR(r.threshold, normal_quantile(0.1), 0);
}

TEST(Decide, Errors) {
  EXPECT_THROW(decide(synthetic({1.0}), 0.05), ParameterError);
  EXPECT_THROW(decide(synthetic({1.0, 2.0}), 0.0), ParameterError);
  EXPECT_THROW(decide(synthetic({1.0, 2.0}), 1.0), ParameterError);
}

TEST(Bootstrap, SinglePointIsDegenerate) {
  const Dataset data(40, 2, std::vector<double>(80, 3.25));
  const auto draws = bootstrap_draws(data, 1, 20, 3, RngStream(1));
  for (double t : draws.t_star) EXPECT_EQ(t, 0.0);
  const auto r = decide(draws, 0.05);
  EXPECT_TRUE(r.degenerate);
  EXPECT_FALSE(r.reject);
}

TEST(Bootstrap, ErrorsAndRedraws) {
  const Dataset data = sample(ModelSpec::make(Family::C1k2), 50, RngStream(2));
  EXPECT_THROW(bootstrap_draws(data, 2, 1, 2, RngStream(1)), ParameterError);
  // Two distinct rows out of three: some resamples hit only one of them.
  const Dataset tiny(3, 1, {0.0, 0.0, 1.0});
  const auto draws = bootstrap_draws(tiny, 2, 200, 1, RngStream(5));
  EXPECT_GT(draws.redraws, 0u);
  BootstrapOptions strict;
  strict.max_redraws = 0;
  EXPECT_THROW(bootstrap_draws(tiny, 2, 200, 1, RngStream(5), strict), NumericalError);
}

TEST(Bootstrap, ReproducibleAndParallelInvariant) {
  const Dataset data = sample(ModelSpec::make(Family::TC3k2), 500, RngStream(7));
  BootstrapOptions threaded;
  threaded.parallelism = 3;
  const auto a = bootstrap_draws(data, 2, 30, 5, RngStream(8));
  const auto b = bootstrap_draws(data, 2, 30, 5, RngStream(8), threaded);
  EXPECT_EQ(a.t_star, b.t_star);
  EXPECT_EQ(a.base_wcss, b.base_wcss);
  const auto c = bootstrap_draws(data, 2, 30, 5, RngStream(9));
  EXPECT_NE(a.t_star, c.t_star);
}

TEST(Bootstrap, DrawsTakeBothSigns) {
  const Dataset data = sample(ModelSpec::make(Family::C2k2_2), 2000, RngStream(10));
  const auto draws = bootstrap_draws(data, 2, 60, 5, RngStream(11));
  const auto positive = std::count_if(draws.t_star.begin(), draws.t_star.end(), [](double t) { return t > 0; });
  EXPECT_GT(positive, 0);
  EXPECT_LT(positive, 60);
}

TEST(Bootstrap, TranslationInvariance) {
  const Dataset data = sample(ModelSpec::make(Family::C2k2_3), 1000, RngStream(12));
  const auto a = bootstrap_draws(data, 2, 25, 5, RngStream(13));
  const auto b = bootstrap_draws(transformed(data, 1.0, 17.5), 2, 25, 5, RngStream(13));
  for (std::size_t i = 0; i < a.t_star.size(); ++i) {
    EXPECT_NEAR(a.t_star[i], b.t_star[i], 1e-8 * (1.0 + std::fabs(a.t_star[i]))) << i;
  }
  EXPECT_EQ(decide(a, 0.05).reject, decide(b, 0.05).reject);
}

TEST(Bootstrap, ScaleEquivariance) {
  const Dataset data = sample(ModelSpec::make(Family::C1k2), 1000, RngStream(14));
  const auto a = bootstrap_draws(data, 2, 25, 5, RngStream(15));
  for (double lambda : {2.0, 0.3, 7.0}) {
    const auto b = bootstrap_draws(transformed(data, lambda, 0.0), 2, 25, 5, RngStream(15));
    for (std::size_t i = 0; i < a.t_star.size(); ++i) {
      EXPECT_NEAR(b.t_star[i], lambda * lambda * a.t_star[i], 1e-9 * lambda * lambda * (1 + std::fabs(a.t_star[i])));
    }
    const auto ra = decide(a, 0.05), rb = decide(b, 0.05);
    EXPECT_NEAR(ra.t_bar_star, rb.t_bar_star, 1e-8);
    EXPECT_EQ(ra.reject, rb.reject);
  }
}

TEST(Bootstrap, ReportCarriesRunSettings) {
  const Dataset data = sample(ModelSpec::make(Family::C1k2), 300, RngStream(16));
  const auto draws = bootstrap_draws(data, 2, 10, 4, RngStream(17));
  const auto r = decide(draws, 0.05);
  EXPECT_EQ(r.n, 300u);
  EXPECT_EQ(r.d, 2u);
  EXPECT_EQ(r.k, 2u);
  EXPECT_EQ(r.B, 10u);
  EXPECT_EQ(r.restarts, 4u);
  EXPECT_EQ(r.seed, 17u);
  EXPECT_GT(r.wall_time_s, 0.0);
}
