#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "aesthrec/feature_table.hpp"
#include "aesthrec/kernels.hpp"

namespace aesthrec::style {

// Activations of one convolutional layer for one photo: `channels` rows of
// `positions` floats, row-major. Layers are numbered 1..16 over the conv
// layers of VGG-19 in forward order.
struct FeatureMap {
  std::string photo_id;
  std::uint16_t layer_index = 0;
  std::uint32_t channels = 0;
  std::uint32_t positions = 0;
  std::vector<float> data;

  float at(std::size_t channel, std::size_t position) const {
    return data[channel * positions + position];
  }
};

struct StyleVector {
  std::string photo_id;
  std::uint16_t layer_index = 0;
  std::vector<float> values;  // channels x channels, row-major
};

// G = F F^T / (C M), flattened row-major.
//
// Each entry is the correctly rounded value of the exact dot product (float
// products are exact in double and are summed without intermediate rounding),
// so G is bitwise symmetric and bitwise invariant to any permutation of the
// spatial positions. Throws kNumericInput on NaN/Inf and kValidation on
// inconsistent shapes.
StyleVector gram(const FeatureMap& map);

// Feature-map fixture files ("PHFM"): header, then records until EOF.
void write_feature_maps(std::span<const FeatureMap> maps, std::ostream& out);
std::vector<FeatureMap> read_feature_maps(std::istream& in);
std::vector<FeatureMap> read_feature_maps(const std::filesystem::path& path);

}  // namespace aesthrec::style
