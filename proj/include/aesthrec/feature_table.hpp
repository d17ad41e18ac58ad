#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aesthrec {

// Per-photo dense side-information vectors (color histogram, style vector or
// metadata multi-hot) of one uniform dimension, ordered by photo id.
class FeatureTable {
 public:
  using Vector = std::vector<float>;
  using Storage = std::map<std::string, Vector, std::less<>>;

  FeatureTable() = default;
  explicit FeatureTable(std::uint32_t dimension) : dimension_(dimension) {}

  std::uint32_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }

  // Inserts or replaces the vector for `photo_id`. The first insertion into a
  // dimensionless table fixes the dimension; later mismatches throw.
  void insert(std::string photo_id, Vector values);

  bool contains(std::string_view photo_id) const;
  // nullopt when the photo has no vector.
  std::optional<std::span<const float>> find(std::string_view photo_id) const;

  Storage::const_iterator begin() const noexcept { return rows_.begin(); }
  Storage::const_iterator end() const noexcept { return rows_.end(); }

  bool operator==(const FeatureTable& other) const;

 private:
  std::uint32_t dimension_ = 0;
  Storage rows_;
};

}  // namespace aesthrec
