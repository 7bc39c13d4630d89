#include "hmrfcs/image.hpp"

#include <algorithm>
#include <string>

#include "hmrfcs/error.hpp"

namespace hmrfcs {

namespace {

void check_shape(int width, int height, std::size_t length) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::invalid_argument,
                "image dimensions must be positive, got " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
  if (length != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::dimension_mismatch,
                "buffer holds " + std::to_string(length) + " values for a " +
                    std::to_string(width) + "x" + std::to_string(height) + " grid");
  }
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_shape(width_, height_, pixels_.size());
}

LabelMap::LabelMap(int width, int height, int num_classes, std::vector<Label> labels)
    : width_(width), height_(height), num_classes_(num_classes), labels_(std::move(labels)) {
  check_shape(width_, height_, labels_.size());
  if (num_classes_ < 1 || num_classes_ > kMaxClasses) {
    throw Error(ErrorCode::invalid_argument,
                "class count must be in [1, " + std::to_string(kMaxClasses) + "], got " +
                    std::to_string(num_classes_));
  }
  const auto bad = std::find_if(labels_.begin(), labels_.end(), [&](Label l) {
    return l < 1 || l > num_classes_;
  });
  if (bad != labels_.end()) {
    throw Error(ErrorCode::out_of_range, "label " + std::to_string(*bad) + " outside [1, " +
                                             std::to_string(num_classes_) + "]");
  }
}

}  // namespace hmrfcs
