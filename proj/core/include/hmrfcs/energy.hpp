#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "hmrfcs/image.hpp"

namespace hmrfcs {

/// A point in the search space: one candidate mean per class. Components may
/// lie outside [0, 255]; the energy extends itself with a linear penalty there.
struct MeansVector {
  std::vector<double> values;

  MeansVector() = default;
  explicit MeansVector(std::vector<double> v) : values(std::move(v)) {}
  MeansVector(std::initializer_list<double> v) : values(v) {}

  std::size_t size() const noexcept { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  auto begin() const noexcept { return values.begin(); }
  auto end() const noexcept { return values.end(); }

  friend bool operator==(const MeansVector&, const MeansVector&) = default;
};

inline constexpr double kMinIntensity = 0.0;
inline constexpr double kMaxIntensity = 255.0;

/// Projects every component onto [0, 255].
MeansVector clamp_to_intensity_range(const MeansVector& mu);

enum class Neighborhood { four = 4, eight = 8 };

struct EnergyParams {
  double coupling = 1.0;       // B
  double temperature = 4.0;    // T
  Neighborhood neighborhood = Neighborhood::eight;
  double sigma_floor = 1e-2;   // lower bound on class standard deviations
  double penalty_slope = 1e3;  // energy per intensity unit outside [0, 255]

  void validate() const;
};

struct ClassStats {
  std::vector<double> means;
  std::vector<double> stddevs;
  std::vector<std::size_t> counts;
};

/// Nearest-mean labelling; ties go to the smaller class index.
LabelMap classify(const GrayImage& image, const MeansVector& mu);

/// Per-class mean and population standard deviation of the pixels carrying
/// each label. Standard deviations are floored at `sigma_floor`; an empty
/// class reports mean 0 and stddev `sigma_floor`.
ClassStats class_stats(const GrayImage& image, const LabelMap& labels, double sigma_floor);

/// Sum of (1 - 2 delta(x_s, x_t)) over every unordered neighbouring pair.
/// No wraparound at the borders.
std::int64_t clique_sum(const LabelMap& labels, Neighborhood neighborhood);

/// Number of unordered neighbouring pairs in a width x height grid.
std::int64_t neighbor_pair_count(int width, int height, Neighborhood neighborhood);

/// Per-class decomposition of the energy. Each clique is charged to the class
/// of its first site in row-major order.
struct EnergyBreakdown {
  std::vector<double> data;          // sum over S_j of ln sigma_j + (y_s - mu_j)^2 / (2 sigma_j^2)
  std::vector<double> clique_share;  // (B/T) * cliques owned by class j
  std::vector<double> penalty;       // penalty_slope * distance of mu_j outside [0, 255]
  std::int64_t clique_sum = 0;

  double total() const;
};

/// Evaluates the energy by labelling every pixel explicitly. This is the
/// reference route; EnergyModel computes the same value from histograms.
EnergyBreakdown psi_breakdown(const GrayImage& image, const MeansVector& mu,
                              const EnergyParams& params);

double psi(const GrayImage& image, const MeansVector& mu, const EnergyParams& params);

/// Precomputed sufficient statistics of one image for fast repeated energy
/// evaluation. Since nearest-mean labels depend only on intensity, the data
/// term needs just the 256-bin histogram and the clique term needs the
/// intensity co-occurrence counts of neighbouring pairs. Evaluation cost is
/// independent of the image size.
///
/// Immutable after construction; operator() is safe to call concurrently.
class EnergyModel {
 public:
  EnergyModel(const GrayImage& image, const EnergyParams& params);

  double operator()(const MeansVector& mu) const;

  const EnergyParams& params() const noexcept { return params_; }
  std::int64_t pair_count() const noexcept { return pair_count_; }
  std::size_t pixel_count() const noexcept { return pixel_count_; }

 private:
  static constexpr int kLevels = 256;

  // Ordered co-occurrence counts summed over the rectangle [a0,a1] x [b0,b1].
  std::int64_t block_sum(int a0, int a1, int b0, int b1) const;

  EnergyParams params_;
  std::size_t pixel_count_ = 0;
  std::int64_t pair_count_ = 0;
  std::array<std::int64_t, kLevels> histogram_{};
  // (kLevels + 1)^2 inclusive prefix sums of the co-occurrence matrix.
  std::vector<std::int64_t> prefix_;
};

}  // namespace hmrfcs
