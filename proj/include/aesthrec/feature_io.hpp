#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "aesthrec/feature_table.hpp"

namespace aesthrec {

// "PHFV" feature file, shared by color histograms, style vectors and the
// external embedder:
//
//   magic "PHFV" | version u16 = 1 | record count u64 | dimension u32
//   per record (ascending id): id length u16 | id bytes | dimension x f32
//
// All integers and floats little-endian. Payloads round-trip bit-exactly.
inline constexpr char kFeatureMagic[4] = {'P', 'H', 'F', 'V'};
inline constexpr std::uint16_t kFeatureVersion = 1;
inline constexpr std::size_t kFeatureHeaderBytes = 4 + 2 + 8 + 4;

// Returns the number of bytes written.
std::size_t write_features(const FeatureTable& table, std::ostream& out);
void write_features(const FeatureTable& table, const std::filesystem::path& path);

// Throws FormatError (bad magic, version mismatch, truncated stream,
// inconsistent dimension, trailing data, unsorted ids).
FeatureTable read_features(std::istream& in);
FeatureTable read_features(const std::filesystem::path& path);

}  // namespace aesthrec
