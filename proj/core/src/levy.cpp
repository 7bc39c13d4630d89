#include "hmrfcs/levy.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "hmrfcs/error.hpp"

namespace hmrfcs {

namespace {

void check_beta(double beta) {
  if (!(beta > 1.0 && beta <= 2.0)) {
    throw Error(ErrorCode::invalid_argument, "levy beta must lie in (1, 2]");
  }
}

}  // namespace

double mantegna_sigma(double beta) {
  check_beta(beta);
  const double numerator = std::tgamma(1.0 + beta) * std::sin(std::numbers::pi * beta / 2.0);
  const double denominator =
      std::tgamma((1.0 + beta) / 2.0) * beta * std::pow(2.0, (beta - 1.0) / 2.0);
  return std::pow(numerator / denominator, 1.0 / beta);
}

std::vector<double> levy_steps(int count, double beta, Rng& rng) {
  const double sigma_u = mantegna_sigma(beta);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> steps(static_cast<std::size_t>(std::max(count, 0)));
  for (double& step : steps) {
    const double u = sigma_u * normal(rng);
    const double v = normal(rng);
    step = u / std::pow(std::abs(v), 1.0 / beta);
  }
  return steps;
}

}  // namespace hmrfcs
