#include "aesthrec/feature_table.hpp"

#include <cstring>

#include "aesthrec/error.hpp"

namespace aesthrec {

void FeatureTable::insert(std::string photo_id, Vector values) {
  if (rows_.empty() && dimension_ == 0) {
    dimension_ = static_cast<std::uint32_t>(values.size());
  }
  if (values.size() != dimension_) {
    throw FormatError(FormatErrorKind::kInconsistentDimension,
                      "vector for '" + photo_id + "' has dimension " +
                          std::to_string(values.size()) + ", table has " +
                          std::to_string(dimension_));
  }
  rows_.insert_or_assign(std::move(photo_id), std::move(values));
}

bool FeatureTable::contains(std::string_view photo_id) const {
  return rows_.find(photo_id) != rows_.end();
}

std::optional<std::span<const float>> FeatureTable::find(
    std::string_view photo_id) const {
  auto it = rows_.find(photo_id);
  if (it == rows_.end()) return std::nullopt;
  return std::span<const float>(it->second);
}

// Bitwise comparison so NaN payloads and signed zeros count as data.
bool FeatureTable::operator==(const FeatureTable& other) const {
  if (dimension_ != other.dimension_ || rows_.size() != other.rows_.size()) {
    return false;
  }
  auto a = rows_.begin();
  auto b = other.rows_.begin();
  for (; a != rows_.end(); ++a, ++b) {
    if (a->first != b->first || a->second.size() != b->second.size()) {
      return false;
    }
    if (std::memcmp(a->second.data(), b->second.data(),
                    a->second.size() * sizeof(float)) != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace aesthrec
