#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "hmrfcs/error.hpp"
#include "hmrfcs/image.hpp"
#include "hmrfcs/random.hpp"

namespace hmrfcs {

void PhantomSpec::validate() const {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::invalid_argument, "phantom dimensions must be positive");
  }
  const auto k = static_cast<int>(class_means.size());
  if (k < 2 || k > kMaxClasses) {
    throw Error(ErrorCode::invalid_argument, "phantom needs between 2 and " +
                                                 std::to_string(kMaxClasses) + " class means");
  }
  for (std::size_t j = 0; j < class_means.size(); ++j) {
    const double m = class_means[j];
    if (!(m >= 0.0 && m <= 255.0)) {
      throw Error(ErrorCode::invalid_argument, "class mean " + std::to_string(m) + " outside [0, 255]");
    }
    if (j > 0 && !(class_means[j - 1] < m)) {
      throw Error(ErrorCode::invalid_argument, "class means must be strictly ascending");
    }
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw Error(ErrorCode::invalid_argument, "noise sigma must be finite and non-negative");
  }
}

namespace {

Label band_label(int y, int height, int k) {
  return static_cast<Label>(static_cast<std::int64_t>(y) * k / height + 1);
}

Label disk_label(int x, int y, int width, int height, int k) {
  const double cx = (width - 1) / 2.0;
  const double cy = (height - 1) / 2.0;
  const double ring = std::min(width, height) / (2.0 * k);
  const double r = std::hypot(x - cx, y - cy);
  const int from_centre = static_cast<int>(std::floor(r / ring));
  return static_cast<Label>(std::max(1, k - from_centre));
}

}  // namespace

Phantom generate_phantom(const PhantomSpec& spec) {
  spec.validate();
  const int k = static_cast<int>(spec.class_means.size());
  const std::size_t count = std::size_t(spec.width) * std::size_t(spec.height);

  std::vector<Label> labels(count);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      labels[std::size_t(y) * spec.width + x] =
          spec.region_layout == RegionLayout::horizontal_bands
              ? band_label(y, spec.height, k)
              : disk_label(x, y, spec.width, spec.height, k);
    }
  }

  Rng rng = make_rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::uint8_t> pixels(count);
  for (std::size_t i = 0; i < count; ++i) {
    double value = spec.class_means[labels[i] - 1];
    if (spec.noise_sigma > 0.0) value += spec.noise_sigma * noise(rng);
    pixels[i] = static_cast<std::uint8_t>(std::clamp<long>(std::lround(value), 0, 255));
  }

  return {GrayImage(spec.width, spec.height, std::move(pixels)),
          LabelMap(spec.width, spec.height, k, std::move(labels))};
}

}  // namespace hmrfcs
