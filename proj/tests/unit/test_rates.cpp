#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "sfv/noise.hpp"
#include "sfv/rates.hpp"

using namespace sfv;

TEST(Rates, ExactPowerLaws) {
  EXPECT_NEAR(fit_rate({{0.1, 0.2}, {0.05, 0.1}, {0.025, 0.05}}).slope, 1.0, 1e-12);
  EXPECT_NEAR(fit_rate({{1.0, 1.0}, {0.5, 0.25}, {0.25, 0.0625}}).slope, 2.0, 1e-12);
  EXPECT_NEAR(fit_rate({{1.0, 1.0}, {0.5, 0.25}}).residual, 0.0, 1e-15);
}

TEST(Rates, PerturbedQuadratic) {
  std::vector<std::pair<double, double>> pairs;
  double h = 0.5;
  for (std::uint64_t i = 0; i < 6; ++i, h /= 2.0) pairs.emplace_back(h, h * h * (1.0 + 0.01 * counter_normal(3, 3, i)));
  const RateFit fit = fit_rate(pairs);
  EXPECT_GE(fit.slope, 1.95);
  EXPECT_LE(fit.slope, 2.05);
}

TEST(Rates, DomainErrors) {
  EXPECT_THROW(fit_rate({{0.1, 0.2}}), DomainError);
  EXPECT_THROW(fit_rate({{0.1, 0.2}, {0.05, 0.0}}), DomainError);
  EXPECT_THROW(fit_rate({{0.1, 0.2}, {-0.05, 0.1}}), DomainError);
  EXPECT_THROW(fit_rate({{0.1, 0.2}, {0.1, 0.1}}), DomainError);
}

TEST(Rates, MeanCiHandExample) {
  const MeanCi ci = mc_mean_ci({0.0, 2.0});
  EXPECT_DOUBLE_EQ(ci.mean, 1.0);
  // sample std sqrt(2), 1.96 sqrt(2) / sqrt(2)
  EXPECT_NEAR(ci.half_width, 1.96, 1e-15);
}

TEST(Rates, MeanCiConstant) {
  const MeanCi ci = mc_mean_ci(std::vector<double>(7, 0.3));
  EXPECT_NEAR(ci.mean, 0.3, 1e-16);
  EXPECT_EQ(ci.half_width, 0.0);
}

TEST(Rates, MeanCiPermutationInvariant) {
  std::vector<double> s;
  for (std::uint64_t i = 0; i < 257; ++i) s.push_back(std::exp(counter_normal(8, 0, i)) * 1e-3);
  const MeanCi a = mc_mean_ci(s);
  std::reverse(s.begin(), s.end());
  std::rotate(s.begin(), s.begin() + 100, s.end());
  const MeanCi b = mc_mean_ci(s);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.half_width, b.half_width);
}

TEST(Rates, MeanCiNeedsSamples) {
  EXPECT_THROW(mc_mean_ci({}), DomainError);
}
