#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hmrfcs/error.hpp"
#include "hmrfcs/levy.hpp"

namespace hmrfcs {
namespace {

double tail_fraction(const std::vector<double>& xs, double threshold) {
  const auto hits = std::count_if(xs.begin(), xs.end(), [&](double x) { return std::abs(x) > threshold; });
  return static_cast<double>(hits) / static_cast<double>(xs.size());
}

TEST(MantegnaSigmaTest, KnownValueAtOnePointFive) {
  // Gamma(2.5) = 3 sqrt(pi) / 4, Gamma(1.25) = 0.9064024770554771
  const double num = 0.75 * std::sqrt(std::numbers::pi) * std::sin(0.75 * std::numbers::pi);
  const double den = 0.9064024770554771 * 1.5 * std::pow(2.0, 0.25);
  EXPECT_NEAR(mantegna_sigma(1.5), std::pow(num / den, 1.0 / 1.5), 1e-12);
  EXPECT_NEAR(mantegna_sigma(1.5), 0.6966, 1e-3);
}

TEST(MantegnaSigmaTest, RejectsBetaOutsideRange) {
  for (double beta : {0.5, 1.0, 2.01, -1.0, std::nan("")}) {
    EXPECT_THROW(mantegna_sigma(beta), Error) << beta;
    Rng rng(1);
    EXPECT_THROW(levy_steps(3, beta, rng), Error) << beta;
  }
}

TEST(LevyStepsTest, CountAndDeterminism) {
  Rng a(42);
  Rng b(42);
  const auto first = levy_steps(100, 1.5, a);
  EXPECT_EQ(first.size(), 100u);
  EXPECT_EQ(first, levy_steps(100, 1.5, b));
  Rng c(1);
  EXPECT_TRUE(levy_steps(0, 1.5, c).empty());
}

TEST(LevyStepsTest, SymmetricAndFinite) {
  Rng rng(7);
  const auto steps = levy_steps(100000, 1.5, rng);
  EXPECT_TRUE(std::all_of(steps.begin(), steps.end(), [](double s) { return std::isfinite(s); }));
  const auto positive = std::count_if(steps.begin(), steps.end(), [](double s) { return s > 0; });
  EXPECT_NEAR(static_cast<double>(positive) / 1e5, 0.5, 0.01);
}

TEST(LevyStepsTest, HeavierTailThanNormal) {
  Rng rng(3);
  const auto steps = levy_steps(100000, 1.5, rng);
  std::normal_distribution<double> normal;
  std::vector<double> gauss(100000);
  for (double& g : gauss) g = normal(rng);
  const double levy_tail = tail_fraction(steps, 10.0);
  EXPECT_GT(levy_tail, tail_fraction(gauss, 10.0));
  // P(|X| > 10) ~ 1e-23 for a standard normal; here it is around a percent.
  EXPECT_GT(levy_tail, 1e-3);
}

TEST(LevyStepsTest, BetaTwoHasNoHeavyTail) {
  Rng rng(5);
  const auto steps = levy_steps(100000, 2.0, rng);
  EXPECT_EQ(tail_fraction(steps, 10.0), 0.0);
}

}  // namespace
}  // namespace hmrfcs
