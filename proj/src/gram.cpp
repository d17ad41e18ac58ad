#include <cmath>
#include <fstream>

#include "aesthrec/error.hpp"
#include "aesthrec/style.hpp"
#include "binary_io.hpp"
#include "exact_sum.hpp"

namespace aesthrec::style {

namespace {

constexpr char kMapMagic[4] = {'P', 'H', 'F', 'M'};
constexpr std::uint16_t kMapVersion = 1;

void validate(const FeatureMap& map) {
  if (map.channels < 1 || map.positions < 1) {
    throw Error(ErrorCode::kValidation, "feature map '" + map.photo_id +
                                            "' needs at least one channel and position");
  }
  if (map.data.size() != static_cast<std::size_t>(map.channels) * map.positions) {
    throw Error(ErrorCode::kValidation,
                "feature map '" + map.photo_id + "' payload does not match C x M");
  }
  for (float v : map.data) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNumericInput,
                  "feature map '" + map.photo_id + "' contains a non-finite value");
    }
  }
}

}  // namespace

StyleVector gram(const FeatureMap& map) {
  validate(map);
  const std::size_t c = map.channels;
  const std::size_t m = map.positions;
  const double scale = static_cast<double>(c) * static_cast<double>(m);

  StyleVector out{map.photo_id, map.layer_index, std::vector<float>(c * c)};
  detail::ExactSum acc;
  for (std::size_t a = 0; a < c; ++a) {
    const float* fa = map.data.data() + a * m;
    for (std::size_t b = a; b < c; ++b) {
      const float* fb = map.data.data() + b * m;
      acc.clear();
      for (std::size_t p = 0; p < m; ++p) {
        acc.add(static_cast<double>(fa[p]) * static_cast<double>(fb[p]));
      }
      const auto g = static_cast<float>(acc.result() / scale);
      out.values[a * c + b] = g;
      out.values[b * c + a] = g;
    }
  }
  return out;
}

void write_feature_maps(std::span<const FeatureMap> maps, std::ostream& out) {
  detail::LeWriter w(out);
  w.put_bytes(kMapMagic, 4);
  w.put(kMapVersion);
  for (const auto& map : maps) {
    if (map.data.size() != static_cast<std::size_t>(map.channels) * map.positions) {
      throw FormatError(FormatErrorKind::kInconsistentDimension,
                        "feature map '" + map.photo_id + "' payload does not match C x M");
    }
    w.put_id(map.photo_id);
    w.put(map.layer_index);
    w.put(map.channels);
    w.put(map.positions);
    w.put_floats(map.data.data(), map.data.size());
  }
  if (!w.ok()) throw Error(ErrorCode::kIo, "feature map write failed");
}

std::vector<FeatureMap> read_feature_maps(std::istream& in) {
  detail::LeReader r(in);
  char magic[4];
  r.read_exact(magic, 4, "magic");
  if (std::memcmp(magic, kMapMagic, 4) != 0) {
    throw FormatError(FormatErrorKind::kBadMagic, "not a PHFM feature-map file");
  }
  const auto version = r.get<std::uint16_t>("version");
  if (version != kMapVersion) {
    throw FormatError(FormatErrorKind::kVersionMismatch,
                      "feature-map version " + std::to_string(version));
  }
  std::vector<FeatureMap> maps;
  while (!r.at_end()) {
    FeatureMap map;
    map.photo_id = r.get_id();
    map.layer_index = r.get<std::uint16_t>("layer");
    map.channels = r.get<std::uint32_t>("channels");
    map.positions = r.get<std::uint32_t>("positions");
    if (static_cast<std::uint64_t>(map.channels) * map.positions > (std::uint64_t{1} << 31)) {
      throw FormatError(FormatErrorKind::kInconsistentDimension,
                        "feature map '" + map.photo_id + "' declares an implausible C x M");
    }
    map.data.resize(static_cast<std::size_t>(map.channels) * map.positions);
    r.get_floats(map.data.data(), map.data.size(), "feature-map payload");
    maps.push_back(std::move(map));
  }
  return maps;
}

std::vector<FeatureMap> read_feature_maps(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return read_feature_maps(in);
}

}  // namespace aesthrec::style
