#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace hmrfcs {

using Label = std::uint16_t;

/// Largest number of classes a label map can carry; every label must map to a
/// distinct 8-bit gray level when written out.
inline constexpr int kMaxClasses = 256;

/// 8-bit grayscale image, row-major. The observed field of the segmentation.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Row-major map of class labels in {1..K}. The hidden field of the segmentation.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int width, int height, int num_classes, std::vector<Label> labels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int num_classes() const noexcept { return num_classes_; }
  std::size_t size() const noexcept { return labels_.size(); }

  std::span<const Label> labels() const noexcept { return labels_; }
  Label at(int x, int y) const {
    return labels_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(x)];
  }

  bool same_shape(const LabelMap& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int num_classes_ = 0;
  std::vector<Label> labels_;
};

// ---------------------------------------------------------------------------
// File I/O

/// Reads a binary PGM (P5, maxval 255) or an 8-bit single-channel PNG.
/// Multi-channel or 16-bit inputs are rejected rather than converted.
GrayImage load_gray_image(const std::filesystem::path& path);

/// Writes a binary PGM: header `P5\n<w> <h>\n255\n` followed by w*h bytes.
void save_gray_image(const GrayImage& image, const std::filesystem::path& path);

/// Gray level used to store label `label` of a K-class map:
/// round((label - 1) * 255 / (K - 1)), or 0 when K == 1.
std::uint8_t label_to_gray(Label label, int num_classes);

/// Writes the map as a PGM plus a `<path>.meta` sidecar holding `classes=<K>`.
void save_label_map(const LabelMap& labels, const std::filesystem::path& path);

/// Explicit gray-code to label mapping for ground truths that were not written
/// by save_label_map (for example a native dataset label volume slice).
struct LabelTable {
  int num_classes = 0;
  std::vector<std::pair<std::uint8_t, Label>> entries;
};

/// Parses a label table: one `<gray> <label>` pair per line, `#` comments.
/// The class count is the largest label present.
LabelTable load_label_table(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& path);

/// Reads a label map. With a table, gray values are translated through it;
/// otherwise the `<path>.meta` sidecar must exist and every pixel must be one
/// of the K gray levels produced by label_to_gray.
LabelMap load_label_map(const std::filesystem::path& path,
                        const std::optional<LabelTable>& table = std::nullopt);

// ---------------------------------------------------------------------------
// Synthetic phantoms

enum class RegionLayout { horizontal_bands, concentric_disks };

struct PhantomSpec {
  int width = 128;
  int height = 128;
  std::vector<double> class_means{30.0, 90.0, 150.0, 210.0};
  RegionLayout region_layout = RegionLayout::concentric_disks;
  double noise_sigma = 10.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Phantom {
  GrayImage image;
  LabelMap truth;
};

/// Pure function of the spec. Class 1 is the darkest mean.
///
/// horizontal_bands: K bands of equal height, label 1 on top.
/// concentric_disks: K rings around the image centre with radius step
/// min(w, h) / (2K); the innermost disk is class K and everything beyond the
/// outer ring (corners) is class 1.
Phantom generate_phantom(const PhantomSpec& spec);

}  // namespace hmrfcs
