#include <algorithm>
#include <cmath>
#include <string>

#include "hmrfcs/energy.hpp"
#include "hmrfcs/error.hpp"

namespace hmrfcs {

EnergyModel::EnergyModel(const GrayImage& image, const EnergyParams& params)
    : params_(params), pixel_count_(image.size()) {
  params_.validate();
  if (image.size() == 0) throw Error(ErrorCode::invalid_argument, "empty image");

  for (std::uint8_t p : image.pixels()) ++histogram_[p];

  constexpr int stride = kLevels + 1;
  prefix_.assign(std::size_t(stride) * stride, 0);
  const auto pixels = image.pixels();
  const int w = image.width();
  const int h = image.height();
  const bool diagonals = params_.neighborhood == Neighborhood::eight;
  auto count = [&](std::size_t s, std::size_t t) {
    ++prefix_[std::size_t(pixels[s] + 1) * stride + std::size_t(pixels[t] + 1)];
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t s = std::size_t(y) * w + x;
      if (x + 1 < w) count(s, s + 1);
      if (y + 1 < h) {
        count(s, s + w);
        if (diagonals) {
          if (x + 1 < w) count(s, s + w + 1);
          if (x > 0) count(s, s + w - 1);
        }
      }
    }
  }
  for (int a = 1; a < stride; ++a) {
    for (int b = 1; b < stride; ++b) {
      prefix_[std::size_t(a) * stride + b] += prefix_[std::size_t(a - 1) * stride + b] +
                                              prefix_[std::size_t(a) * stride + b - 1] -
                                              prefix_[std::size_t(a - 1) * stride + b - 1];
    }
  }
  pair_count_ = prefix_.back();
}

std::int64_t EnergyModel::block_sum(int a0, int a1, int b0, int b1) const {
  constexpr std::size_t stride = kLevels + 1;
  const auto at = [this](int a, int b) { return prefix_[std::size_t(a) * stride + std::size_t(b)]; };
  return at(a1 + 1, b1 + 1) - at(a0, b1 + 1) - at(a1 + 1, b0) + at(a0, b0);
}

double EnergyModel::operator()(const MeansVector& mu) const {
  const std::size_t k = mu.size();
  if (k < 1 || k > static_cast<std::size_t>(kMaxClasses)) {
    throw Error(ErrorCode::invalid_argument,
                "means vector must have between 1 and " + std::to_string(kMaxClasses) + " entries");
  }

  double penalty = 0.0;
  std::vector<double> clamped(k);
  for (std::size_t j = 0; j < k; ++j) {
    clamped[j] = std::clamp(mu[j], kMinIntensity, kMaxIntensity);
    if (mu[j] < kMinIntensity) {
      penalty += params_.penalty_slope * (kMinIntensity - mu[j]);
    } else if (mu[j] > kMaxIntensity) {
      penalty += params_.penalty_slope * (mu[j] - kMaxIntensity);
    }
  }

  // Nearest-mean class of every gray level, grouped into runs of equal label.
  struct Run {
    int lo;
    int hi;
    std::size_t label;
  };
  std::array<std::size_t, kLevels> lut{};
  std::vector<Run> runs;
  for (int v = 0; v < kLevels; ++v) {
    std::size_t best = 0;
    double best_distance = std::abs(v - clamped[0]);
    for (std::size_t j = 1; j < k; ++j) {
      const double d = std::abs(v - clamped[j]);
      if (d < best_distance) {
        best = j;
        best_distance = d;
      }
    }
    lut[std::size_t(v)] = best;
    if (!runs.empty() && runs.back().label == best) {
      runs.back().hi = v;
    } else {
      runs.push_back({v, v, best});
    }
  }

  std::vector<double> counts(k, 0.0);
  std::vector<double> sums(k, 0.0);
  for (int v = 0; v < kLevels; ++v) {
    const auto n = static_cast<double>(histogram_[std::size_t(v)]);
    counts[lut[std::size_t(v)]] += n;
    sums[lut[std::size_t(v)]] += n * v;
  }
  std::vector<double> central(k, 0.0);
  std::vector<double> residual(k, 0.0);
  for (int v = 0; v < kLevels; ++v) {
    const auto n = static_cast<double>(histogram_[std::size_t(v)]);
    if (n == 0.0) continue;
    const std::size_t j = lut[std::size_t(v)];
    const double d = v - sums[j] / counts[j];
    const double r = v - clamped[j];
    central[j] += n * d * d;
    residual[j] += n * r * r;
  }

  double data = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    if (counts[j] == 0.0) continue;
    const double sigma = std::max(std::sqrt(central[j] / counts[j]), params_.sigma_floor);
    data += counts[j] * std::log(sigma) + residual[j] / (2.0 * sigma * sigma);
  }

  std::int64_t equal_pairs = 0;
  for (const Run& r1 : runs) {
    for (const Run& r2 : runs) {
      if (r1.label == r2.label) equal_pairs += block_sum(r1.lo, r1.hi, r2.lo, r2.hi);
    }
  }
  const auto cliques = static_cast<double>(pair_count_ - 2 * equal_pairs);

  return (data + params_.coupling / params_.temperature * cliques) + penalty;
}

}  // namespace hmrfcs
