#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aesthrec/feature_table.hpp"
#include "aesthrec/kernels.hpp"

namespace aesthrec::style {

// Human-annotated groups of aesthetically similar photos.
class AestheticSets {
 public:
  // Every group needs >= 2 photos and no photo may appear twice.
  explicit AestheticSets(std::vector<std::vector<std::string>> groups);

  const std::vector<std::vector<std::string>>& groups() const noexcept { return groups_; }
  // All annotated photos in ascending id order.
  const std::vector<std::string>& photos() const noexcept { return photos_; }
  // Group index of each entry of photos().
  std::size_t group_of(std::size_t photo_rank) const { return group_of_.at(photo_rank); }

  std::size_t pair_count() const noexcept;
  std::size_t within_pair_count() const noexcept;

 private:
  std::vector<std::vector<std::string>> groups_;
  std::vector<std::string> photos_;
  std::vector<std::size_t> group_of_;
};

// JSON array of arrays of photo-id strings.
AestheticSets parse_aesthetic_sets(std::string_view json_text);
AestheticSets load_aesthetic_sets(const std::filesystem::path& path);

// Similarity for every unordered annotated pair, most similar first; ties by
// lexicographic (first id, second id). fraction of the top k pairs that share
// a group, for each k in `ks`.
std::vector<double> topk_pair_precision(const FeatureTable& table, const AestheticSets& sets,
                                        Kernel kernel, std::span<const std::size_t> ks);

struct LayerKernelResult {
  int layer = 0;
  Kernel kernel = Kernel::kCosine;
  std::vector<std::size_t> ks;
  std::vector<double> precision;  // aligned with ks

  double mean_precision() const;
};

// Runs topk_pair_precision for every (layer, kernel) combination, ordered by
// layer then kernel.
std::vector<LayerKernelResult> pairwise_topk_precision(const std::map<int, FeatureTable>& tables,
                                                       const AestheticSets& sets,
                                                       std::span<const Kernel> kernels,
                                                       std::span<const std::size_t> ks);

struct BestConfiguration {
  int layer = 0;
  Kernel kernel = Kernel::kCosine;
  double mean_precision = 0.0;
};

// Argmax of mean precision over the k list; ties go to the lower layer, then
// to the earlier kernel in Cosine < Euclidean < Pearson order.
BestConfiguration select_best_configuration(std::span<const LayerKernelResult> results);

}  // namespace aesthrec::style
