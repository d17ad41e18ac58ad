#include "aesthrec/color.hpp"

#include <algorithm>
#include <cmath>

#include "aesthrec/error.hpp"
#include "aesthrec/parallel.hpp"

namespace aesthrec::color {

std::string_view to_string(ColorSpace space) noexcept {
  return space == ColorSpace::kRgb ? "rgb" : "hsv";
}

ColorSpace parse_color_space(std::string_view text) {
  if (text == "rgb") return ColorSpace::kRgb;
  if (text == "hsv") return ColorSpace::kHsv;
  throw Error(ErrorCode::kInvalidArgument, "unknown color space '" + std::string(text) + "'");
}

RgbImage::RgbImage(std::size_t w, std::size_t h) : width(w), height(h), pixels(w * h * 3, 0) {}

RgbImage RgbImage::solid(std::size_t w, std::size_t h, std::uint8_t r, std::uint8_t g,
                         std::uint8_t b) {
  RgbImage img(w, h);
  for (std::size_t p = 0; p < w * h; ++p) {
    img.pixels[3 * p] = r;
    img.pixels[3 * p + 1] = g;
    img.pixels[3 * p + 2] = b;
  }
  return img;
}

void RgbImage::set(std::size_t x, std::size_t y, std::uint8_t r, std::uint8_t g,
                   std::uint8_t b) {
  const std::size_t p = 3 * (y * width + x);
  pixels.at(p) = r;
  pixels.at(p + 1) = g;
  pixels.at(p + 2) = b;
}

Hsv rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) noexcept {
  const int mx = std::max({r8, g8, b8});
  const int mn = std::min({r8, g8, b8});
  const double delta = mx - mn;
  Hsv out;
  out.v = mx / 255.0;
  out.s = mx == 0 ? 0.0 : delta / mx;
  if (delta == 0) return out;

  const double r = r8, g = g8, b = b8;
  double h;
  if (mx == r8) {
    h = 60.0 * ((g - b) / delta);
    if (h < 0.0) h += 360.0;
  } else if (mx == g8) {
    h = 60.0 * ((b - r) / delta + 2.0);
  } else {
    h = 60.0 * ((r - g) / delta + 4.0);
  }
  out.h = h >= 360.0 ? h - 360.0 : h + 0.0;
  return out;
}

Rgb hsv_to_rgb(const Hsv& hsv) noexcept {
  const double c = hsv.v * hsv.s;
  const double hp = std::fmod(hsv.h, 360.0) / 60.0;
  const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  const double m = hsv.v - c;
  auto to_byte = [m](double channel) {
    return static_cast<std::uint8_t>(std::clamp(std::lround((channel + m) * 255.0), 0L, 255L));
  };
  return {to_byte(r), to_byte(g), to_byte(b)};
}

namespace {

// The bin helpers use exact integer arithmetic so pixels sitting on a bin
// edge are never misplaced by rounding.
std::size_t capped(std::size_t bin, std::size_t bins) { return std::min(bin, bins - 1); }

std::size_t hue_bin(int r, int g, int b, std::size_t bins) {
  const int mx = std::max({r, g, b});
  const int mn = std::min({r, g, b});
  const long delta = mx - mn;
  if (delta == 0) return 0;
  // Hue in sixths of the circle is numer / delta, numer in [0, 6 * delta).
  long numer;
  if (mx == r) {
    numer = g >= b ? g - b : 6 * delta - (b - g);
  } else if (mx == g) {
    numer = 2 * delta + (b - r);
  } else {
    numer = 4 * delta + (r - g);
  }
  return capped(static_cast<std::size_t>(numer) * bins / static_cast<std::size_t>(6 * delta), bins);
}

std::size_t saturation_bin(int r, int g, int b, std::size_t bins) {
  const int mx = std::max({r, g, b});
  if (mx == 0) return 0;
  const int delta = mx - std::min({r, g, b});
  return capped(static_cast<std::size_t>(delta) * bins / static_cast<std::size_t>(mx), bins);
}

std::size_t value_bin(int r, int g, int b, std::size_t bins) {
  const int mx = std::max({r, g, b});
  return capped(static_cast<std::size_t>(mx) * bins / 255, bins);
}

std::size_t byte_bin(int c, std::size_t bins) {
  return static_cast<std::size_t>(c) * bins / 256;
}

}  // namespace

ColorHistogram extract_histogram(const RgbImage& image, ColorSpace space,
                                 std::size_t bins) {
  if (bins < 1) throw Error(ErrorCode::kInvalidArgument, "bins_per_channel must be >= 1");
  const std::size_t n = image.pixel_count();
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "image has no pixels");
  if (image.pixels.size() != 3 * n) {
    throw Error(ErrorCode::kValidation, "pixel buffer does not match width x height");
  }

  std::vector<std::size_t> counts(3 * bins, 0);
  const auto* px = image.pixels.data();
  for (std::size_t p = 0; p < n; ++p) {
    const int r = px[3 * p], g = px[3 * p + 1], b = px[3 * p + 2];
    if (space == ColorSpace::kHsv) {
      ++counts[hue_bin(r, g, b, bins)];
      ++counts[bins + saturation_bin(r, g, b, bins)];
      ++counts[2 * bins + value_bin(r, g, b, bins)];
    } else {
      ++counts[byte_bin(r, bins)];
      ++counts[bins + byte_bin(g, bins)];
      ++counts[2 * bins + byte_bin(b, bins)];
    }
  }

  ColorHistogram hist{space, bins, std::vector<double>(3 * bins)};
  const double total = static_cast<double>(n);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    hist.values[i] = static_cast<double>(counts[i]) / total;
  }
  return hist;
}

BatchResult batch_extract(const std::filesystem::path& dir, ColorSpace space,
                          std::size_t bins) {
  if (bins < 1) throw Error(ErrorCode::kInvalidArgument, "bins_per_channel must be >= 1");
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<std::optional<ColorHistogram>> hists(files.size());
  parallel_for(files.size(), [&](std::size_t i) {
    if (auto img = decode_image(files[i]); img && img->pixel_count() > 0) {
      hists[i] = extract_histogram(*img, space, bins);
    }
  });

  BatchResult result{FeatureTable(static_cast<std::uint32_t>(3 * bins)), {}};
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!hists[i]) {
      result.skipped.push_back({files[i], "undecodable image"});
      continue;
    }
    auto id = files[i].stem().string();
    if (result.table.contains(id)) {
      result.skipped.push_back({files[i], "duplicate photo id '" + id + "'"});
      continue;
    }
    std::vector<float> v(hists[i]->values.begin(), hists[i]->values.end());
    result.table.insert(std::move(id), std::move(v));
  }
  if (result.table.empty()) {
    throw Error(ErrorCode::kEmptyOutput, "no decodable images in " + dir.string());
  }
  return result;
}

}  // namespace aesthrec::color
