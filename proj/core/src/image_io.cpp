#include <png.h>

#include <array>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>

#include "hmrfcs/error.hpp"
#include "hmrfcs/image.hpp"

namespace hmrfcs {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kMaxDimension = 1u << 20;
constexpr std::uint64_t kMaxPixels = 1u << 30;

void check_dimensions(std::uint64_t width, std::uint64_t height, const fs::path& path) {
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::unsupported_format, path.string() + ": zero image dimension");
  }
  if (width > kMaxDimension || height > kMaxDimension || width * height > kMaxPixels) {
    throw Error(ErrorCode::dimension_overflow,
                path.string() + ": " + std::to_string(width) + "x" + std::to_string(height) +
                    " exceeds the supported image size");
  }
}

std::ifstream open_for_read(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw Error(ErrorCode::file_not_found, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, "cannot open " + path.string());
  return in;
}

// Netpbm header token: skips whitespace and '#' comments.
std::uint64_t read_header_number(std::istream& in, const fs::path& path) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n' && c != '\r') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (c == EOF || !std::isdigit(c)) {
    throw Error(ErrorCode::unsupported_format, path.string() + ": malformed PGM header");
  }
  std::uint64_t value = 0;
  while (c != EOF && std::isdigit(c)) {
    const auto digit = static_cast<std::uint64_t>(c - '0');
    if (value > (std::numeric_limits<std::uint64_t>::max() - digit) / 10) {
      throw Error(ErrorCode::dimension_overflow, path.string() + ": header value overflows");
    }
    value = value * 10 + digit;
    c = in.get();
  }
  // Exactly one whitespace byte separates the last header field from the raster.
  if (c == EOF || !std::isspace(c)) {
    throw Error(ErrorCode::unsupported_format, path.string() + ": malformed PGM header");
  }
  return value;
}

GrayImage read_pgm(std::istream& in, const fs::path& path) {
  const std::uint64_t width = read_header_number(in, path);
  const std::uint64_t height = read_header_number(in, path);
  const std::uint64_t maxval = read_header_number(in, path);
  if (maxval != 255) {
    throw Error(ErrorCode::unsupported_format,
                path.string() + ": maxval " + std::to_string(maxval) + " (only 255 is supported)");
  }
  check_dimensions(width, height, path);

  std::vector<std::uint8_t> pixels(width * height);
  in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (static_cast<std::uint64_t>(in.gcount()) != pixels.size()) {
    throw Error(ErrorCode::unsupported_format, path.string() + ": truncated PGM raster");
  }
  return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};

GrayImage read_png(const fs::path& path) {
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "rb"));
  if (!file) throw Error(ErrorCode::io_failure, "cannot open " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw Error(ErrorCode::io_failure, "libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorCode::io_failure, "libpng initialisation failed");
  }

  // Everything touched after setjmp lives outside C++ object lifetimes that
  // longjmp would skip.
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  volatile int failure = 0;  // 1: libpng error, 2: unsupported layout, 3: size

  if (setjmp(png_jmpbuf(png))) {
    failure = 1;
  } else {
    png_init_io(png, file.get());
    png_read_info(png, info);
    png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr, nullptr, nullptr);
    if (color_type != PNG_COLOR_TYPE_GRAY || bit_depth != 8) {
      failure = 2;
    } else if (width > kMaxDimension || height > kMaxDimension ||
               std::uint64_t{width} * height > kMaxPixels) {
      failure = 3;
    } else {
      pixels.resize(std::size_t{width} * height);
      rows.resize(height);
      for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + std::size_t{y} * width;
      png_read_image(png, rows.data());
      png_read_end(png, nullptr);
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);

  switch (failure) {
    case 1:
      throw Error(ErrorCode::unsupported_format, path.string() + ": corrupt PNG");
    case 2:
      throw Error(ErrorCode::unsupported_format,
                  path.string() + ": only 8-bit single-channel PNG is supported (color type " +
                      std::to_string(color_type) + ", bit depth " + std::to_string(bit_depth) +
                      ")");
    case 3:
      check_dimensions(width, height, path);
      break;
    default:
      break;
  }
  return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

void write_pgm(const fs::path& path, int width, int height, const std::uint8_t* data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_failure, "cannot write " + path.string());
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(data),
            static_cast<std::streamsize>(std::size_t(width) * std::size_t(height)));
  out.flush();
  if (!out) throw Error(ErrorCode::io_failure, "short write to " + path.string());
}

int read_sidecar_classes(const fs::path& path) {
  const fs::path meta = sidecar_path(path);
  std::ifstream in = open_for_read(meta);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    constexpr std::string_view key = "classes=";
    if (line.rfind(key, 0) == 0) {
      const std::string value = line.substr(key.size());
      std::size_t consumed = 0;
      int k = 0;
      try {
        k = std::stoi(value, &consumed);
      } catch (const std::exception&) {
        consumed = 0;
      }
      if (consumed != value.size() || k < 1 || k > kMaxClasses) {
        throw Error(ErrorCode::unsupported_format, meta.string() + ": bad class count '" + value + "'");
      }
      return k;
    }
  }
  throw Error(ErrorCode::unsupported_format, meta.string() + ": missing classes= entry");
}

}  // namespace

GrayImage load_gray_image(const fs::path& path) {
  std::ifstream in = open_for_read(path);
  std::array<unsigned char, 8> magic{};
  in.read(reinterpret_cast<char*>(magic.data()), magic.size());
  const auto got = static_cast<std::size_t>(in.gcount());

  if (got == magic.size() && png_sig_cmp(magic.data(), 0, magic.size()) == 0) {
    in.close();
    return read_png(path);
  }
  if (got >= 2 && magic[0] == 'P' && magic[1] == '5') {
    in.clear();
    in.seekg(2);
    return read_pgm(in, path);
  }
  throw Error(ErrorCode::unsupported_format, path.string() + ": not a binary PGM (P5) or PNG file");
}

void save_gray_image(const GrayImage& image, const fs::path& path) {
  write_pgm(path, image.width(), image.height(), image.pixels().data());
}

std::uint8_t label_to_gray(Label label, int num_classes) {
  if (num_classes <= 1) return 0;
  const double scaled = (static_cast<double>(label) - 1.0) * 255.0 / (num_classes - 1);
  return static_cast<std::uint8_t>(std::lround(scaled));
}

fs::path sidecar_path(const fs::path& path) {
  fs::path meta = path;
  meta += ".meta";
  return meta;
}

void save_label_map(const LabelMap& labels, const fs::path& path) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(labels.size());
  for (Label l : labels.labels()) bytes.push_back(label_to_gray(l, labels.num_classes()));
  write_pgm(path, labels.width(), labels.height(), bytes.data());

  const fs::path meta = sidecar_path(path);
  std::ofstream out(meta, std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_failure, "cannot write " + meta.string());
  out << "classes=" << labels.num_classes() << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::io_failure, "short write to " + meta.string());
}

LabelTable load_label_table(const fs::path& path) {
  std::ifstream in = open_for_read(path);
  LabelTable table;
  std::array<bool, 256> seen{};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long gray = 0;
    long label = 0;
    if (!(fields >> gray)) continue;
    std::string rest;
    if (!(fields >> label) || (fields >> rest) || gray < 0 || gray > 255 || label < 1 ||
        label > kMaxClasses) {
      throw Error(ErrorCode::unsupported_format,
                  path.string() + ":" + std::to_string(line_no) + ": expected '<gray 0-255> <label>'");
    }
    if (seen[static_cast<std::size_t>(gray)]) {
      throw Error(ErrorCode::unsupported_format,
                  path.string() + ":" + std::to_string(line_no) + ": duplicate gray value");
    }
    seen[static_cast<std::size_t>(gray)] = true;
    table.entries.emplace_back(static_cast<std::uint8_t>(gray), static_cast<Label>(label));
    table.num_classes = std::max(table.num_classes, static_cast<int>(label));
  }
  if (table.entries.empty()) {
    throw Error(ErrorCode::unsupported_format, path.string() + ": empty label table");
  }
  return table;
}

LabelMap load_label_map(const fs::path& path, const std::optional<LabelTable>& table) {
  const GrayImage gray = load_gray_image(path);

  std::array<int, 256> lookup;
  lookup.fill(0);
  int num_classes = 0;
  if (table) {
    num_classes = table->num_classes;
    for (const auto& [code, label] : table->entries) lookup[code] = label;
  } else {
    num_classes = read_sidecar_classes(path);
    for (int l = 1; l <= num_classes; ++l) {
      lookup[label_to_gray(static_cast<Label>(l), num_classes)] = l;
    }
  }

  std::vector<Label> labels;
  labels.reserve(gray.size());
  for (std::uint8_t p : gray.pixels()) {
    if (lookup[p] == 0) {
      throw Error(ErrorCode::unsupported_format,
                  path.string() + ": gray value " + std::to_string(p) +
                      " does not correspond to any of the " + std::to_string(num_classes) +
                      " labels");
    }
    labels.push_back(static_cast<Label>(lookup[p]));
  }
  return LabelMap(gray.width(), gray.height(), num_classes, std::move(labels));
}

}  // namespace hmrfcs
