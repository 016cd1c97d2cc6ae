#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "kmu/error.hpp"
#include "kmu/numeric.hpp"
#include "kmu/parallel.hpp"
#include "kmu/rng.hpp"

using namespace kmu;

TEST(NormalQuantile, ReferenceValues) {
  EXPECT_EQ(normal_quantile(0.5), 0.0);
  EXPECT_NEAR(normal_quantile(0.05), -1.6448536269514727, 1e-10);
  EXPECT_NEAR(normal_quantile(0.975), 1.9599639845400542, 1e-10);
  EXPECT_NEAR(normal_quantile(0.001), -3.0902323061678133, 1e-10);
  EXPECT_NEAR(normal_quantile(1e-10), -6.3613409024040562, 1e-10);
}

TEST(NormalQuantile, InvertsCdf) {
  for (double p = 0.001; p < 1.0; p += 0.0137) {
    EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-13) << p;
  }
  EXPECT_NEAR(normal_quantile(0.3), -normal_quantile(0.7), 1e-15);
}

TEST(NormalQuantile, RejectsOutOfRange) {
  EXPECT_THROW(normal_quantile(0.0), ParameterError);
  EXPECT_THROW(normal_quantile(1.0), ParameterError);
  EXPECT_THROW(normal_quantile(-0.2), ParameterError);
  EXPECT_THROW(normal_quantile(std::nan("")), ParameterError);
}

TEST(NormalCdf, ReferenceValues) {
  EXPECT_NEAR(normal_cdf(1.3), 0.90319951541438967, 1e-15);
  EXPECT_NEAR(normal_pdf(0.7), 0.31225393336676127, 1e-15);
  EXPECT_EQ(normal_cdf(0.0), 0.5);
}

TEST(CompensatedSum, RecoversCancellation) {
  CompensatedSum s;
  s += 1e16;
  s += 1.0;
  s += -1e16;
  EXPECT_EQ(s.value(), 1.0);
  CompensatedSum t;
  for (int i = 0; i < 10; ++i) t += 0.1;
  EXPECT_EQ(t.value(), 1.0);
}

TEST(Moments, MatchesDirectFormulas) {
  const std::vector<double> xs{1.0, 2.0, 4.0, 7.0, 11.0, 11.5};
  Moments m;
  for (double x : xs) m.add(x);
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  double m2 = 0, m3 = 0, m4 = 0;
  for (double x : xs) {
    m2 += std::pow(x - mean, 2);
    m3 += std::pow(x - mean, 3);
    m4 += std::pow(x - mean, 4);
  }
  const double n = xs.size();
  EXPECT_NEAR(m.mean(), mean, 1e-14);
  EXPECT_NEAR(m.variance(), m2 / (n - 1), 1e-12);
  EXPECT_NEAR(m.skewness(), (m3 / n) / std::pow(m2 / n, 1.5), 1e-12);
  EXPECT_NEAR(m.excess_kurtosis(), (m4 / n) / std::pow(m2 / n, 2) - 3.0, 1e-12);
}

TEST(Moments, MergeEqualsSequential) {
  Moments all, a, b;
  Rng rng(RngStream(5));
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.normal() * 3 + 1;
    all.add(x);
    (i < 377 ? a : b).add(x);
  }
  a.merge(b);
  EXPECT_EQ(a.count(), all.count());
  EXPECT_NEAR(a.mean(), all.mean(), 1e-12);
  EXPECT_NEAR(a.variance(), all.variance(), 1e-10);
  EXPECT_NEAR(a.skewness(), all.skewness(), 1e-10);
  EXPECT_NEAR(a.excess_kurtosis(), all.excess_kurtosis(), 1e-10);
}

TEST(Rng, StreamsAreDeterministicAndDistinct) {
  Rng a(RngStream(42)), b(RngStream(42));
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  std::set<std::uint64_t> keys;
  const RngStream root(42);
  for (std::uint64_t i = 0; i < 10000; ++i) keys.insert(root.split(i).key());
  EXPECT_EQ(keys.size(), 10000u);
  EXPECT_NE(root.split(1).split(2), root.split(2).split(1));
}

TEST(Rng, UniformAndBelowRanges) {
  Rng rng(RngStream(1));
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const std::size_t j = rng.below(7);
    ASSERT_LT(j, 7u);
    ++counts[j];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(Rng, NormalMoments) {
  Rng rng(RngStream(9));
  Moments m;
  for (int i = 0; i < 200000; ++i) m.add(rng.normal());
  const double se = 1.0 / std::sqrt(200000.0);
  EXPECT_NEAR(m.mean(), 0.0, 4 * se);
  EXPECT_NEAR(m.variance(), 1.0, 4 * std::sqrt(2.0) * se);
  EXPECT_NEAR(m.skewness(), 0.0, 4 * std::sqrt(6.0) * se);
  EXPECT_NEAR(m.excess_kurtosis(), 0.0, 4 * std::sqrt(24.0) * se);
}

TEST(ParallelFor, CoversEveryIndexAndRethrows) {
  std::vector<int> hit(1000, 0);
  parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(100, 3,
                            [](std::size_t i) {
                              if (i == 57) throw NumericalError("boom");
                            }),
               NumericalError);
  EXPECT_GE(hardware_workers(), 1u);
}
