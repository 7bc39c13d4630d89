#include <gtest/gtest.h>
#include <png.h>

#include <functional>
#include <map>
#include <random>

#include "hmrfcs/error.hpp"
#include "hmrfcs/image.hpp"
#include "test_support.hpp"

namespace hmrfcs {
namespace {

using namespace std::string_literals;
using testing::TempDir;
using testing::read_bytes;
using testing::write_bytes;

ErrorCode error_code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no hmrfcs::Error thrown";
  return ErrorCode::invalid_argument;
}

void write_png(const std::filesystem::path& path, png_uint_32 format, int width, int height,
               const std::vector<std::uint8_t>& buffer) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  ASSERT_NE(png_image_write_to_file(&image, path.c_str(), 0, buffer.data(), 0, nullptr), 0)
      << image.message;
}

TEST(GrayImageTest, RejectsMismatchedBuffer) {
  EXPECT_EQ(error_code_of([] { GrayImage(2, 2, {1, 2, 3}); }), ErrorCode::dimension_mismatch);
  EXPECT_EQ(error_code_of([] { GrayImage(0, 2, {}); }), ErrorCode::invalid_argument);
}

TEST(LabelMapTest, RejectsLabelsOutsideRange) {
  EXPECT_EQ(error_code_of([] { LabelMap(2, 1, 2, {1, 3}); }), ErrorCode::out_of_range);
  EXPECT_EQ(error_code_of([] { LabelMap(2, 1, 2, {0, 1}); }), ErrorCode::out_of_range);
  EXPECT_EQ(error_code_of([] { LabelMap(1, 1, 0, {1}); }), ErrorCode::invalid_argument);
}

TEST(LoadGrayImageTest, ReadsTwoByTwoPgm) {
  TempDir dir;
  write_bytes(dir / "a.pgm", std::string("P5\n2 2\n255\n") + "\x0a\x0c\xc8\xca");
  const GrayImage image = load_gray_image(dir / "a.pgm");
  EXPECT_EQ(image, GrayImage(2, 2, {10, 12, 200, 202}));
}

TEST(LoadGrayImageTest, SkipsHeaderComments) {
  TempDir dir;
  write_bytes(dir / "c.pgm", std::string("P5\n# made by hand\n2 1 # width height\n255\n") + "\x01\x02");
  EXPECT_EQ(load_gray_image(dir / "c.pgm"), GrayImage(2, 1, {1, 2}));
}

TEST(LoadGrayImageTest, RejectsSixteenBitPgm) {
  TempDir dir;
  write_bytes(dir / "deep.pgm", std::string("P5\n1 1\n65535\n") + "\x01\x02");
  EXPECT_EQ(error_code_of([&] { load_gray_image(dir / "deep.pgm"); }), ErrorCode::unsupported_format);
}

TEST(LoadGrayImageTest, ErrorPaths) {
  TempDir dir;
  EXPECT_EQ(error_code_of([&] { load_gray_image(dir / "missing.pgm"); }), ErrorCode::file_not_found);

  write_bytes(dir / "ascii.pgm", "P2\n1 1\n255\n7\n");
  EXPECT_EQ(error_code_of([&] { load_gray_image(dir / "ascii.pgm"); }), ErrorCode::unsupported_format);

  write_bytes(dir / "short.pgm", std::string("P5\n4 4\n255\n") + "abc");
  EXPECT_EQ(error_code_of([&] { load_gray_image(dir / "short.pgm"); }), ErrorCode::unsupported_format);

  write_bytes(dir / "huge.pgm", "P5\n4000000 4000000\n255\n");
  EXPECT_EQ(error_code_of([&] { load_gray_image(dir / "huge.pgm"); }), ErrorCode::dimension_overflow);

  write_bytes(dir / "overflow.pgm", "P5\n99999999999999999999999 1\n255\n");
  EXPECT_EQ(error_code_of([&] { load_gray_image(dir / "overflow.pgm"); }), ErrorCode::dimension_overflow);
}

TEST(LoadGrayImageTest, SaveThenLoadIsIdentity) {
  TempDir dir;
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> size(1, 40);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int trial = 0; trial < 25; ++trial) {
    const int w = size(rng);
    const int h = size(rng);
    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(w * h));
    for (auto& p : pixels) p = static_cast<std::uint8_t>(byte(rng));
    const GrayImage image(w, h, pixels);
    save_gray_image(image, dir / "rt.pgm");
    ASSERT_EQ(load_gray_image(dir / "rt.pgm"), image) << "trial " << trial;
  }
}

TEST(LoadGrayImageTest, WritesCanonicalHeader) {
  TempDir dir;
  save_gray_image(GrayImage(3, 1, {0, 128, 255}), dir / "h.pgm");
  const auto bytes = read_bytes(dir / "h.pgm");
  EXPECT_EQ(std::string(bytes.begin(), bytes.end()), std::string("P5\n3 1\n255\n") + "\x00\x80\xff"s);
}

TEST(LoadGrayImageTest, ReadsEightBitGrayPng) {
  TempDir dir;
  write_png(dir / "g.png", PNG_FORMAT_GRAY, 3, 2, {0, 1, 2, 253, 254, 255});
  EXPECT_EQ(load_gray_image(dir / "g.png"), GrayImage(3, 2, {0, 1, 2, 253, 254, 255}));
}

TEST(LoadGrayImageTest, RejectsMultiChannelPng) {
  TempDir dir;
  write_png(dir / "rgb.png", PNG_FORMAT_RGB, 1, 1, {10, 20, 30});
  EXPECT_EQ(error_code_of([&] { load_gray_image(dir / "rgb.png"); }), ErrorCode::unsupported_format);
  write_png(dir / "ga.png", PNG_FORMAT_GA, 1, 1, {10, 255});
  EXPECT_EQ(error_code_of([&] { load_gray_image(dir / "ga.png"); }), ErrorCode::unsupported_format);
}

TEST(LoadGrayImageTest, RejectsSixteenBitPng) {
  TempDir dir;
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = 1;
  image.height = 1;
  image.format = PNG_FORMAT_LINEAR_Y;
  const std::uint16_t value = 1000;
  ASSERT_NE(png_image_write_to_file(&image, (dir / "d.png").c_str(), 0, &value, 0, nullptr), 0);
  EXPECT_EQ(error_code_of([&] { load_gray_image(dir / "d.png"); }), ErrorCode::unsupported_format);
}

TEST(SaveLabelMapTest, LinearGrayScale) {
  EXPECT_EQ(label_to_gray(1, 2), 0);
  EXPECT_EQ(label_to_gray(2, 2), 255);
  EXPECT_EQ(label_to_gray(2, 4), 85);  // round(255 / 3)
  EXPECT_EQ(label_to_gray(3, 4), 170);
  EXPECT_EQ(label_to_gray(1, 1), 0);
}

TEST(SaveLabelMapTest, WritesPgmAndSidecar) {
  TempDir dir;
  save_label_map(LabelMap(2, 1, 2, {1, 2}), dir / "l.pgm");
  EXPECT_EQ(load_gray_image(dir / "l.pgm"), GrayImage(2, 1, {0, 255}));
  const auto meta = read_bytes(dir / "l.pgm.meta");
  EXPECT_EQ(std::string(meta.begin(), meta.end()), "classes=2\n");

  save_label_map(LabelMap(2, 1, 1, {1, 1}), dir / "one.pgm");
  EXPECT_EQ(load_gray_image(dir / "one.pgm"), GrayImage(2, 1, {0, 0}));
}

TEST(SaveLabelMapTest, RoundTripPreservesLabelsAndK) {
  TempDir dir;
  std::mt19937_64 rng(5);
  for (int k : {1, 2, 3, 4, 7, 255, 256}) {
    std::uniform_int_distribution<int> label(1, k);
    std::vector<Label> labels(12 * 9);
    for (auto& l : labels) l = static_cast<Label>(label(rng));
    const LabelMap map(12, 9, k, labels);
    save_label_map(map, dir / "m.pgm");
    EXPECT_EQ(load_label_map(dir / "m.pgm"), map) << "K=" << k;
  }
}

TEST(LoadLabelMapTest, RequiresSidecarOrTable) {
  TempDir dir;
  save_gray_image(GrayImage(2, 1, {0, 255}), dir / "t.pgm");
  EXPECT_EQ(error_code_of([&] { load_label_map(dir / "t.pgm"); }), ErrorCode::file_not_found);

  write_bytes(dir / "t.pgm.meta", "classes=3\n");
  // K=3: gray 0 is label 1, gray 255 is label 3.
  EXPECT_EQ(load_label_map(dir / "t.pgm"), LabelMap(2, 1, 3, {1, 3}));

  write_bytes(dir / "t.pgm.meta", "classes=4\n");
  save_gray_image(GrayImage(2, 1, {0, 100}), dir / "t.pgm");
  EXPECT_EQ(error_code_of([&] { load_label_map(dir / "t.pgm"); }), ErrorCode::unsupported_format);

  write_bytes(dir / "t.pgm.meta", "classes=zero\n");
  EXPECT_EQ(error_code_of([&] { load_label_map(dir / "t.pgm"); }), ErrorCode::unsupported_format);
}

TEST(LoadLabelMapTest, TranslatesThroughLabelTable) {
  TempDir dir;
  save_gray_image(GrayImage(4, 1, {0, 128, 192, 254}), dir / "ibsr.pgm");
  write_bytes(dir / "table.txt", "# code label\n0 1\n128 2\n192 3\n254 4\n");
  const LabelTable table = load_label_table(dir / "table.txt");
  EXPECT_EQ(table.num_classes, 4);
  EXPECT_EQ(load_label_map(dir / "ibsr.pgm", table), LabelMap(4, 1, 4, {1, 2, 3, 4}));

  write_bytes(dir / "partial.txt", "0 1\n128 2\n");
  EXPECT_EQ(error_code_of([&] { load_label_map(dir / "ibsr.pgm", load_label_table(dir / "partial.txt")); }),
            ErrorCode::unsupported_format);
  write_bytes(dir / "dup.txt", "0 1\n0 2\n");
  EXPECT_EQ(error_code_of([&] { load_label_table(dir / "dup.txt"); }), ErrorCode::unsupported_format);
  write_bytes(dir / "bad.txt", "300 1\n");
  EXPECT_EQ(error_code_of([&] { load_label_table(dir / "bad.txt"); }), ErrorCode::unsupported_format);
}

TEST(PhantomTest, ZeroNoiseBands) {
  PhantomSpec spec;
  spec.width = 4;
  spec.height = 4;
  spec.class_means = {50, 200};
  spec.region_layout = RegionLayout::horizontal_bands;
  spec.noise_sigma = 0;
  const Phantom p = generate_phantom(spec);
  EXPECT_EQ(p.image, GrayImage(4, 4, {50, 50, 50, 50, 50, 50, 50, 50,
                                      200, 200, 200, 200, 200, 200, 200, 200}));
  EXPECT_EQ(p.truth, LabelMap(4, 4, 2, {1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2}));
}

TEST(PhantomTest, IdenticalSpecGivesIdenticalOutput) {
  PhantomSpec spec;
  spec.seed = 42;
  const Phantom a = generate_phantom(spec);
  const Phantom b = generate_phantom(spec);
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(a.truth, b.truth);
  spec.seed = 43;
  EXPECT_NE(generate_phantom(spec).image, a.image);
}

TEST(PhantomTest, DisksUseEveryClassWithBrightCentre) {
  PhantomSpec spec;
  spec.noise_sigma = 0;
  const Phantom p = generate_phantom(spec);
  std::map<Label, int> histogram;
  for (Label l : p.truth.labels()) ++histogram[l];
  EXPECT_EQ(histogram.size(), 4u);
  EXPECT_EQ(p.truth.at(64, 64), 4);
  EXPECT_EQ(p.truth.at(0, 0), 1);
}

TEST(PhantomTest, RegionMeansMatchClassMeans) {
  // Law of large numbers: thousands of pixels per class, standard error ~0.2.
  PhantomSpec spec;
  spec.seed = 3;
  const Phantom p = generate_phantom(spec);
  std::vector<double> sum(4, 0.0);
  std::vector<int> count(4, 0);
  for (std::size_t i = 0; i < p.image.size(); ++i) {
    sum[p.truth.labels()[i] - 1u] += p.image.pixels()[i];
    ++count[p.truth.labels()[i] - 1u];
  }
  for (std::size_t j = 0; j < 4; ++j) {
    ASSERT_GT(count[j], 500);
    EXPECT_NEAR(sum[j] / count[j], spec.class_means[j], 1.0) << "class " << j + 1;
  }
}

TEST(PhantomTest, NoiseIsClampedNotWrapped) {
  PhantomSpec spec;
  spec.width = 64;
  spec.height = 64;
  spec.class_means = {0, 255};
  spec.noise_sigma = 40;
  const Phantom p = generate_phantom(spec);
  int zeros = 0;
  int full = 0;
  for (std::size_t i = 0; i < p.image.size(); ++i) {
    const auto v = p.image.pixels()[i];
    // A wrapped negative would land near 255 inside the dark class.
    if (p.truth.labels()[i] == 1) {
      EXPECT_LT(v, 200);
      zeros += v == 0;
    } else {
      EXPECT_GT(v, 55);
      full += v == 255;
    }
  }
  EXPECT_GT(zeros, 0);
  EXPECT_GT(full, 0);
}

TEST(PhantomTest, RejectsInvalidSpecs) {
  PhantomSpec spec;
  spec.class_means = {100};
  EXPECT_EQ(error_code_of([&] { generate_phantom(spec); }), ErrorCode::invalid_argument);
  spec.class_means = {100, 50};
  EXPECT_EQ(error_code_of([&] { generate_phantom(spec); }), ErrorCode::invalid_argument);
  spec.class_means = {50, 300};
  EXPECT_EQ(error_code_of([&] { generate_phantom(spec); }), ErrorCode::invalid_argument);
  spec.class_means = {50, 100};
  spec.noise_sigma = -1;
  EXPECT_EQ(error_code_of([&] { generate_phantom(spec); }), ErrorCode::invalid_argument);
}

}  // namespace
}  // namespace hmrfcs
