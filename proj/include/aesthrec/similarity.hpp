#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aesthrec/dataset.hpp"
#include "aesthrec/feature_table.hpp"
#include "aesthrec/kernels.hpp"

namespace aesthrec::sim {

using dataset::InteractionMatrix;
using dataset::ItemIndex;

// Sim(j,k) = theta * side(p_j, p_k) + (1 - theta) * interaction(r_j, r_k).
struct BlendConfig {
  double theta = 0.0;
  Kernel side_kernel = Kernel::kCosine;
  Kernel interaction_kernel = Kernel::kCosine;

  void validate() const;
  friend bool operator==(const BlendConfig&, const BlendConfig&) = default;
};

// Side-information vectors aligned with an item index map. Items without a
// vector in the source table are recorded as missing.
class ItemFeatures {
 public:
  ItemFeatures(const FeatureTable& table, const dataset::IndexMap& items);

  std::size_t num_items() const noexcept { return present_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  bool has(ItemIndex j) const { return present_.at(j); }
  std::span<const double> row(ItemIndex j) const;
  const std::string& photo_id(ItemIndex j) const { return ids_.at(j); }
  // First item without a vector, if any.
  std::optional<ItemIndex> first_missing() const;

 private:
  std::size_t dimension_ = 0;
  std::vector<double> values_;
  std::vector<bool> present_;
  std::vector<std::string> ids_;
};

// Read-only pairwise similarity over the items of a training matrix.
class SimilarityModel {
 public:
  SimilarityModel(BlendConfig config, std::shared_ptr<const InteractionMatrix> train,
                  std::shared_ptr<const ItemFeatures> features = nullptr,
                  std::optional<std::size_t> neighbor_limit = std::nullopt);

  const BlendConfig& config() const noexcept { return config_; }
  std::size_t num_items() const noexcept { return train_->num_items(); }
  std::optional<std::size_t> neighbor_limit() const noexcept { return neighbor_limit_; }
  const InteractionMatrix& train() const noexcept { return *train_; }
  const ItemFeatures* features() const noexcept { return features_.get(); }

  double side_similarity(ItemIndex j, ItemIndex k) const;
  double interaction_similarity(ItemIndex j, ItemIndex k) const;
  // Requires j != k. Throws MissingFeatureError when theta > 0 and either
  // item lacks a vector.
  double blended_similarity(ItemIndex j, ItemIndex k) const;

  // Blended similarity of j against every item (entry j is 0). With a
  // neighbor limit L, all but the L largest entries are zeroed; ties keep
  // the lower index.
  std::vector<double> similarity_row(ItemIndex j) const;

 private:
  void check_pair(ItemIndex j, ItemIndex k) const;

  BlendConfig config_;
  std::shared_ptr<const InteractionMatrix> train_;
  std::shared_ptr<const ItemFeatures> features_;
  std::optional<std::size_t> neighbor_limit_;
};

// Dense symmetric n x n kernel values with a zero diagonal.
class KernelMatrix {
 public:
  explicit KernelMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double at(ItemIndex j, ItemIndex k) const { return values_[j * n_ + k]; }
  std::span<const double> row(ItemIndex j) const { return {values_.data() + j * n_, n_}; }
  std::span<double> mutable_row(ItemIndex j) { return {values_.data() + j * n_, n_}; }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

KernelMatrix interaction_kernel_matrix(const InteractionMatrix& train, Kernel kernel);
// Throws MissingFeatureError if any item lacks a vector.
KernelMatrix side_kernel_matrix(const ItemFeatures& features, Kernel kernel);

struct Neighbor {
  ItemIndex item;
  double similarity;
};

inline constexpr double kZeroSumTolerance = 1e-12;

// Materialized blended similarity. Dense without a neighbor limit; one
// sparse neighbor list per item (ascending item index) with one.
class SimilarityMatrix {
 public:
  // `side` may be null only when theta == 0.
  static SimilarityMatrix blend(double theta, const KernelMatrix* side,
                                const KernelMatrix& interaction,
                                std::optional<std::size_t> neighbor_limit);

  std::size_t num_items() const noexcept { return n_; }
  bool is_dense() const noexcept { return !truncated_; }
  double at(ItemIndex j, ItemIndex k) const;
  // Dense form only.
  std::span<const double> dense_row(ItemIndex j) const { return {dense_.data() + j * n_, n_}; }
  // Truncated form only.
  std::span<const Neighbor> neighbors(ItemIndex j) const;
  // Sum over k != j of Sim(j, k). A sum within rounding noise of zero
  // (|sum| <= kZeroSumTolerance * sum of |Sim(j, k)|) is stored as 0.
  double row_sum(ItemIndex j) const { return row_sums_.at(j); }

 private:
  std::size_t n_ = 0;
  bool truncated_ = false;
  std::vector<double> dense_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> sparse_;
  std::vector<double> row_sums_;
};

SimilarityMatrix materialize(const SimilarityModel& model);

// Zeroes all but the `limit` largest entries of `row`, skipping `self`.
void truncate_row(std::span<double> row, ItemIndex self, std::size_t limit);

}  // namespace aesthrec::sim
