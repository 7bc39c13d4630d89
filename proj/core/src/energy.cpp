#include "hmrfcs/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hmrfcs/error.hpp"

namespace hmrfcs {

MeansVector clamp_to_intensity_range(const MeansVector& mu) {
  MeansVector out = mu;
  for (double& v : out.values) v = std::clamp(v, kMinIntensity, kMaxIntensity);
  return out;
}

void EnergyParams::validate() const {
  if (!(coupling > 0.0)) throw Error(ErrorCode::invalid_argument, "coupling B must be > 0");
  if (!(temperature > 0.0)) throw Error(ErrorCode::invalid_argument, "temperature T must be > 0");
  if (!(sigma_floor > 0.0)) throw Error(ErrorCode::invalid_argument, "sigma floor must be > 0");
  if (!(penalty_slope > 0.0)) throw Error(ErrorCode::invalid_argument, "penalty slope must be > 0");
  if (neighborhood != Neighborhood::four && neighborhood != Neighborhood::eight) {
    throw Error(ErrorCode::invalid_argument, "neighborhood must be 4 or 8");
  }
}

namespace {

void require_classes(const MeansVector& mu) {
  if (mu.size() < 1 || mu.size() > static_cast<std::size_t>(kMaxClasses)) {
    throw Error(ErrorCode::invalid_argument,
                "means vector must have between 1 and " + std::to_string(kMaxClasses) + " entries");
  }
}

// Calls visit(s, t) for every unordered neighbouring pair, s first in
// row-major order.
template <typename Visit>
void for_each_clique(int width, int height, Neighborhood neighborhood, Visit&& visit) {
  const bool diagonals = neighborhood == Neighborhood::eight;
  const auto at = [width](int x, int y) { return std::size_t(y) * std::size_t(width) + std::size_t(x); };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t s = at(x, y);
      if (x + 1 < width) visit(s, at(x + 1, y));
      if (y + 1 < height) {
        visit(s, at(x, y + 1));
        if (diagonals) {
          if (x + 1 < width) visit(s, at(x + 1, y + 1));
          if (x > 0) visit(s, at(x - 1, y + 1));
        }
      }
    }
  }
}

}  // namespace

LabelMap classify(const GrayImage& image, const MeansVector& mu) {
  require_classes(mu);
  // Labels depend only on intensity.
  std::array<Label, 256> lut{};
  for (int v = 0; v < 256; ++v) {
    std::size_t best = 0;
    double best_distance = std::abs(v - mu[0]);
    for (std::size_t j = 1; j < mu.size(); ++j) {
      const double d = std::abs(v - mu[j]);
      if (d < best_distance) {
        best = j;
        best_distance = d;
      }
    }
    lut[static_cast<std::size_t>(v)] = static_cast<Label>(best + 1);
  }

  std::vector<Label> labels;
  labels.reserve(image.size());
  for (std::uint8_t p : image.pixels()) labels.push_back(lut[p]);
  return LabelMap(image.width(), image.height(), static_cast<int>(mu.size()), std::move(labels));
}

ClassStats class_stats(const GrayImage& image, const LabelMap& labels, double sigma_floor) {
  if (image.width() != labels.width() || image.height() != labels.height()) {
    throw Error(ErrorCode::dimension_mismatch, "image and label map differ in size");
  }
  const auto k = static_cast<std::size_t>(labels.num_classes());
  ClassStats stats{std::vector<double>(k, 0.0), std::vector<double>(k, sigma_floor),
                   std::vector<std::size_t>(k, 0)};

  const auto pixels = image.pixels();
  const auto classes = labels.labels();
  std::vector<double> sums(k, 0.0);
  for (std::size_t s = 0; s < pixels.size(); ++s) {
    const std::size_t j = classes[s] - 1u;
    ++stats.counts[j];
    sums[j] += pixels[s];
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (stats.counts[j] > 0) stats.means[j] = sums[j] / static_cast<double>(stats.counts[j]);
  }

  std::vector<double> squares(k, 0.0);
  for (std::size_t s = 0; s < pixels.size(); ++s) {
    const std::size_t j = classes[s] - 1u;
    const double d = pixels[s] - stats.means[j];
    squares[j] += d * d;
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (stats.counts[j] == 0) continue;
    const double sigma = std::sqrt(squares[j] / static_cast<double>(stats.counts[j]));
    stats.stddevs[j] = std::max(sigma, sigma_floor);
  }
  return stats;
}

std::int64_t clique_sum(const LabelMap& labels, Neighborhood neighborhood) {
  const auto l = labels.labels();
  std::int64_t sum = 0;
  for_each_clique(labels.width(), labels.height(), neighborhood,
                  [&](std::size_t s, std::size_t t) { sum += l[s] == l[t] ? -1 : 1; });
  return sum;
}

std::int64_t neighbor_pair_count(int width, int height, Neighborhood neighborhood) {
  const std::int64_t w = width;
  const std::int64_t h = height;
  std::int64_t pairs = h * (w - 1) + w * (h - 1);
  if (neighborhood == Neighborhood::eight) pairs += 2 * (w - 1) * (h - 1);
  return pairs;
}

double EnergyBreakdown::total() const {
  const double data_sum = std::accumulate(data.begin(), data.end(), 0.0);
  const double clique_total = std::accumulate(clique_share.begin(), clique_share.end(), 0.0);
  const double penalty_sum = std::accumulate(penalty.begin(), penalty.end(), 0.0);
  return (data_sum + clique_total) + penalty_sum;
}

EnergyBreakdown psi_breakdown(const GrayImage& image, const MeansVector& mu,
                              const EnergyParams& params) {
  require_classes(mu);
  params.validate();
  const std::size_t k = mu.size();
  const MeansVector clamped = clamp_to_intensity_range(mu);
  const LabelMap labels = classify(image, clamped);
  const ClassStats stats = class_stats(image, labels, params.sigma_floor);

  EnergyBreakdown out;
  out.data.assign(k, 0.0);
  out.clique_share.assign(k, 0.0);
  out.penalty.assign(k, 0.0);

  std::vector<double> log_sigma(k);
  std::vector<double> inv_two_var(k);
  for (std::size_t j = 0; j < k; ++j) {
    log_sigma[j] = std::log(stats.stddevs[j]);
    inv_two_var[j] = 1.0 / (2.0 * stats.stddevs[j] * stats.stddevs[j]);
  }
  const auto pixels = image.pixels();
  const auto classes = labels.labels();
  for (std::size_t s = 0; s < pixels.size(); ++s) {
    const std::size_t j = classes[s] - 1u;
    const double r = pixels[s] - clamped[j];
    out.data[j] += log_sigma[j] + r * r * inv_two_var[j];
  }

  std::vector<std::int64_t> owned(k, 0);
  std::int64_t total = 0;
  for_each_clique(labels.width(), labels.height(), params.neighborhood,
                  [&](std::size_t s, std::size_t t) {
                    const int v = classes[s] == classes[t] ? -1 : 1;
                    owned[classes[s] - 1u] += v;
                    total += v;
                  });
  const double scale = params.coupling / params.temperature;
  for (std::size_t j = 0; j < k; ++j) out.clique_share[j] = scale * static_cast<double>(owned[j]);
  out.clique_sum = total;

  for (std::size_t j = 0; j < k; ++j) {
    if (mu[j] < kMinIntensity) {
      out.penalty[j] = params.penalty_slope * (kMinIntensity - mu[j]);
    } else if (mu[j] > kMaxIntensity) {
      out.penalty[j] = params.penalty_slope * (mu[j] - kMaxIntensity);
    }
  }
  return out;
}

double psi(const GrayImage& image, const MeansVector& mu, const EnergyParams& params) {
  return psi_breakdown(image, mu, params).total();
}

}  // namespace hmrfcs
