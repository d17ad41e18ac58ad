#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aesthrec/feature_table.hpp"

namespace aesthrec::color {

enum class ColorSpace { kRgb, kHsv };

std::string_view to_string(ColorSpace space) noexcept;
// Accepts "rgb" or "hsv"; throws kInvalidArgument otherwise.
ColorSpace parse_color_space(std::string_view text);

// Row-major interleaved R,G,B bytes.
struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  RgbImage() = default;
  RgbImage(std::size_t w, std::size_t h);
  // Every pixel set to (r, g, b).
  static RgbImage solid(std::size_t w, std::size_t h, std::uint8_t r, std::uint8_t g,
                        std::uint8_t b);

  std::size_t pixel_count() const noexcept { return width * height; }
  void set(std::size_t x, std::size_t y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};

struct Hsv {
  double h = 0.0;  // degrees, [0, 360)
  double s = 0.0;  // [0, 1]
  double v = 0.0;  // [0, 1]
};

// Hexcone model. Achromatic pixels get hue 0.
Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

// Inverse hexcone conversion, rounded to the nearest byte.
Rgb hsv_to_rgb(const Hsv& hsv) noexcept;

// Three L1-normalized channel blocks concatenated in (H,S,V) or (R,G,B)
// order. Values sum to 3.
struct ColorHistogram {
  ColorSpace space = ColorSpace::kHsv;
  std::size_t bins_per_channel = 0;
  std::vector<double> values;
};

// Uniform bins over each channel's native range: H [0,360), S and V [0,1],
// R, G and B [0,256). The upper end of a closed range lands in the last bin.
ColorHistogram extract_histogram(const RgbImage& image, ColorSpace space,
                                 std::size_t bins_per_channel);

// Decodes PNG/JPEG (anything the codec layer understands). nullopt when the
// file is unreadable or not an image.
std::optional<RgbImage> decode_image(const std::filesystem::path& path);

struct SkippedFile {
  std::filesystem::path path;
  std::string reason;
};

struct BatchResult {
  FeatureTable table;
  std::vector<SkippedFile> skipped;
};

// Histograms every `<photo_id>.<ext>` file of `dir`. Undecodable files are
// reported in `skipped`; zero decodable images is an kEmptyOutput error.
BatchResult batch_extract(const std::filesystem::path& dir, ColorSpace space,
                          std::size_t bins_per_channel);

}  // namespace aesthrec::color
