#include "aesthrec/feature_io.hpp"

#include <fstream>
#include <sstream>

#include "aesthrec/error.hpp"
#include "binary_io.hpp"

namespace aesthrec {

std::size_t write_features(const FeatureTable& table, std::ostream& out) {
  detail::LeWriter w(out);
  w.put_bytes(kFeatureMagic, 4);
  w.put(kFeatureVersion);
  w.put(static_cast<std::uint64_t>(table.size()));
  w.put(table.dimension());
  for (const auto& [id, values] : table) {
    if (values.size() != table.dimension()) {
      throw FormatError(FormatErrorKind::kInconsistentDimension,
                        "record '" + id + "' does not match table dimension");
    }
    w.put_id(id);
    w.put_floats(values.data(), values.size());
  }
  if (!w.ok()) throw Error(ErrorCode::kIo, "feature file write failed");
  return w.written();
}

void write_features(const FeatureTable& table, const std::filesystem::path& path) {
  std::ostringstream buffer;
  write_features(table, buffer);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << buffer.str();
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

FeatureTable read_features(std::istream& in) {
  detail::LeReader r(in);
  char magic[4];
  r.read_exact(magic, 4, "magic");
  if (std::memcmp(magic, kFeatureMagic, 4) != 0) {
    throw FormatError(FormatErrorKind::kBadMagic, "not a PHFV feature file");
  }
  const auto version = r.get<std::uint16_t>("version");
  if (version != kFeatureVersion) {
    throw FormatError(FormatErrorKind::kVersionMismatch,
                      "feature file version " + std::to_string(version) + ", expected " +
                          std::to_string(kFeatureVersion));
  }
  const auto count = r.get<std::uint64_t>("record count");
  const auto dim = r.get<std::uint32_t>("dimension");
  if (dim == 0 && count > 0) {
    throw FormatError(FormatErrorKind::kInconsistentDimension,
                      "zero dimension with " + std::to_string(count) + " records");
  }

  FeatureTable table(dim);
  std::string previous;
  for (std::uint64_t i = 0; i < count; ++i) {
    auto id = r.get_id();
    if (i > 0 && !(previous < id)) {
      throw FormatError(FormatErrorKind::kUnsortedIds,
                        "record '" + id + "' out of order after '" + previous + "'");
    }
    std::vector<float> values(dim);
    r.get_floats(values.data(), dim, "vector payload");
    previous = id;
    table.insert(std::move(id), std::move(values));
  }
  if (!r.at_end()) {
    throw FormatError(FormatErrorKind::kTrailingData,
                      "bytes remain after " + std::to_string(count) + " declared records");
  }
  return table;
}

FeatureTable read_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return read_features(in);
}

}  // namespace aesthrec
