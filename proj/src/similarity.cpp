#include "aesthrec/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aesthrec/error.hpp"
#include "aesthrec/parallel.hpp"

namespace aesthrec::sim {

namespace {

double settle_zero(double sum, double magnitude) {
  return std::abs(sum) <= kZeroSumTolerance * magnitude ? 0.0 : sum;
}

}  // namespace

void BlendConfig::validate() const {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "theta must lie in [0, 1], got " + std::to_string(theta));
  }
}

ItemFeatures::ItemFeatures(const FeatureTable& table, const dataset::IndexMap& items)
    : dimension_(table.dimension()),
      values_(items.size() * table.dimension(), 0.0),
      present_(items.size(), false),
      ids_(items.tokens()) {
  for (ItemIndex j = 0; j < items.size(); ++j) {
    if (auto v = table.find(items.token(j))) {
      std::copy(v->begin(), v->end(), values_.begin() + static_cast<std::ptrdiff_t>(j * dimension_));
      present_[j] = true;
    }
  }
}

std::span<const double> ItemFeatures::row(ItemIndex j) const {
  if (!has(j)) throw MissingFeatureError(ids_[j]);
  return {values_.data() + j * dimension_, dimension_};
}

std::optional<ItemIndex> ItemFeatures::first_missing() const {
  for (ItemIndex j = 0; j < present_.size(); ++j) {
    if (!present_[j]) return j;
  }
  return std::nullopt;
}

SimilarityModel::SimilarityModel(BlendConfig config,
                                 std::shared_ptr<const InteractionMatrix> train,
                                 std::shared_ptr<const ItemFeatures> features,
                                 std::optional<std::size_t> neighbor_limit)
    : config_(config),
      train_(std::move(train)),
      features_(std::move(features)),
      neighbor_limit_(neighbor_limit) {
  config_.validate();
  if (!train_) throw Error(ErrorCode::kInvalidArgument, "similarity model needs a train matrix");
  if (config_.theta > 0.0 && !features_) {
    throw Error(ErrorCode::kInvalidArgument, "theta > 0 requires side-information features");
  }
  if (features_ && features_->num_items() != train_->num_items()) {
    throw Error(ErrorCode::kInvalidArgument,
                "feature alignment covers " + std::to_string(features_->num_items()) +
                    " items, matrix has " + std::to_string(train_->num_items()));
  }
  if (neighbor_limit_ && *neighbor_limit_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "neighbor limit must be >= 1");
  }
}

void SimilarityModel::check_pair(ItemIndex j, ItemIndex k) const {
  if (j >= num_items() || k >= num_items()) {
    throw Error(ErrorCode::kInvalidArgument, "item index out of range");
  }
}

double SimilarityModel::side_similarity(ItemIndex j, ItemIndex k) const {
  check_pair(j, k);
  if (!features_) throw Error(ErrorCode::kInvalidArgument, "model has no side features");
  return similarity(config_.side_kernel, features_->row(j), features_->row(k));
}

double SimilarityModel::interaction_similarity(ItemIndex j, ItemIndex k) const {
  check_pair(j, k);
  return binary_similarity(config_.interaction_kernel, train_->column(j), train_->column(k),
                           train_->num_users());
}

double SimilarityModel::blended_similarity(ItemIndex j, ItemIndex k) const {
  check_pair(j, k);
  if (j == k) throw Error(ErrorCode::kInvalidArgument, "blended similarity needs j != k");
  const double theta = config_.theta;
  const double inter = interaction_similarity(j, k);
  if (theta == 0.0) return inter;
  return theta * side_similarity(j, k) + (1.0 - theta) * inter;
}

void truncate_row(std::span<double> row, ItemIndex self, std::size_t limit) {
  std::vector<ItemIndex> order;
  order.reserve(row.size());
  for (ItemIndex k = 0; k < row.size(); ++k) {
    if (k != self) order.push_back(k);
  }
  if (order.size() <= limit) return;
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(limit), order.end(),
                   [&](ItemIndex a, ItemIndex b) {
                     if (row[a] != row[b]) return row[a] > row[b];
                     return a < b;
                   });
  for (auto it = order.begin() + static_cast<std::ptrdiff_t>(limit); it != order.end(); ++it) {
    row[*it] = 0.0;
  }
}

std::vector<double> SimilarityModel::similarity_row(ItemIndex j) const {
  const std::size_t n = num_items();
  if (j >= n) throw Error(ErrorCode::kInvalidArgument, "item index out of range");

  // Co-occurrence counts with j through the users who liked it.
  std::vector<std::size_t> overlap(n, 0);
  for (auto u : train_->column(j)) {
    for (const auto& cell : train_->row(u)) ++overlap[cell.item];
  }
  const std::size_t ones_j = train_->column(j).size();
  const std::size_t m = train_->num_users();
  const double theta = config_.theta;

  std::vector<double> row(n, 0.0);
  for (ItemIndex k = 0; k < n; ++k) {
    if (k == j) continue;
    const double inter = binary_similarity(config_.interaction_kernel, overlap[k], ones_j,
                                           train_->column(k).size(), m);
    row[k] = theta == 0.0 ? inter
                          : theta * similarity(config_.side_kernel, features_->row(j),
                                               features_->row(k)) +
                                (1.0 - theta) * inter;
  }
  if (neighbor_limit_) truncate_row(row, j, *neighbor_limit_);
  return row;
}

KernelMatrix interaction_kernel_matrix(const InteractionMatrix& train, Kernel kernel) {
  const std::size_t n = train.num_items();
  const std::size_t m = train.num_users();
  KernelMatrix out(n);
  parallel_for(n, [&](std::size_t j) {
    std::vector<std::size_t> overlap(n, 0);
    for (auto u : train.column(static_cast<ItemIndex>(j))) {
      for (const auto& cell : train.row(u)) ++overlap[cell.item];
    }
    const std::size_t ones_j = train.column(static_cast<ItemIndex>(j)).size();
    auto row = out.mutable_row(static_cast<ItemIndex>(j));
    for (ItemIndex k = 0; k < n; ++k) {
      if (k == j) continue;
      row[k] = binary_similarity(kernel, overlap[k], ones_j, train.column(k).size(), m);
    }
  });
  return out;
}

KernelMatrix side_kernel_matrix(const ItemFeatures& features, Kernel kernel) {
  if (auto missing = features.first_missing()) {
    throw MissingFeatureError(features.photo_id(*missing));
  }
  const std::size_t n = features.num_items();
  const std::size_t d = features.dimension();
  if (kernel == Kernel::kPearson && d < 2) {
    throw Error(ErrorCode::kInvalidArgument, "pearson needs length >= 2");
  }

  // Cosine and Pearson reduce to dot products of pre-normalized rows.
  std::vector<double> unit;
  if (kernel != Kernel::kEuclidean) {
    unit.assign(n * d, 0.0);
    for (ItemIndex j = 0; j < n; ++j) {
      auto src = features.row(j);
      double mean = 0.0;
      if (kernel == Kernel::kPearson) {
        mean = std::accumulate(src.begin(), src.end(), 0.0) / static_cast<double>(d);
      }
      double ss = 0.0;
      for (std::size_t t = 0; t < d; ++t) {
        const double c = src[t] - mean;
        unit[j * d + t] = c;
        ss += c * c;
      }
      const double norm = std::sqrt(ss);
      for (std::size_t t = 0; t < d; ++t) {
        unit[j * d + t] = norm == 0.0 ? 0.0 : unit[j * d + t] / norm;
      }
    }
  }

  KernelMatrix out(n);
  parallel_for(n, [&](std::size_t jj) {
    const auto j = static_cast<ItemIndex>(jj);
    auto row = out.mutable_row(j);
    for (ItemIndex k = 0; k < n; ++k) {
      if (k == j) continue;
      if (kernel == Kernel::kEuclidean) {
        row[k] = euclidean_sim(features.row(j), features.row(k));
      } else {
        const double* a = unit.data() + j * d;
        const double* b = unit.data() + k * d;
        double dot = 0.0;
        for (std::size_t t = 0; t < d; ++t) dot += a[t] * b[t];
        row[k] = dot;
      }
    }
  });
  return out;
}

SimilarityMatrix SimilarityMatrix::blend(double theta, const KernelMatrix* side,
                                         const KernelMatrix& interaction,
                                         std::optional<std::size_t> neighbor_limit) {
  BlendConfig{theta}.validate();
  if (theta > 0.0 && !side) {
    throw Error(ErrorCode::kInvalidArgument, "theta > 0 requires a side kernel matrix");
  }
  if (side && side->size() != interaction.size()) {
    throw Error(ErrorCode::kInvalidArgument, "side and interaction matrices differ in size");
  }
  if (neighbor_limit && *neighbor_limit == 0) {
    throw Error(ErrorCode::kInvalidArgument, "neighbor limit must be >= 1");
  }

  SimilarityMatrix out;
  const std::size_t n = interaction.size();
  out.n_ = n;
  out.truncated_ = neighbor_limit.has_value();
  out.dense_.assign(n * n, 0.0);
  out.row_sums_.assign(n, 0.0);
  for (ItemIndex j = 0; j < n; ++j) {
    std::span<double> row(out.dense_.data() + j * n, n);
    for (ItemIndex k = 0; k < n; ++k) {
      if (k == j) continue;
      const double inter = interaction.at(j, k);
      row[k] = theta == 0.0 ? inter : theta * side->at(j, k) + (1.0 - theta) * inter;
    }
  }
  if (!out.truncated_) {
    for (ItemIndex j = 0; j < n; ++j) {
      auto row = out.dense_row(j);
      double sum = 0.0, magnitude = 0.0;
      for (double v : row) {
        sum += v;
        magnitude += std::abs(v);
      }
      out.row_sums_[j] = settle_zero(sum, magnitude);
    }
    return out;
  }

  out.offsets_.assign(n + 1, 0);
  for (ItemIndex j = 0; j < n; ++j) {
    auto row = std::span<const double>(out.dense_.data() + j * n, n);
    std::vector<ItemIndex> order;
    for (ItemIndex k = 0; k < n; ++k) {
      if (k != j) order.push_back(k);
    }
    const std::size_t kept = std::min(*neighbor_limit, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kept),
                      order.end(), [&](ItemIndex a, ItemIndex b) {
                        if (row[a] != row[b]) return row[a] > row[b];
                        return a < b;
                      });
    order.resize(kept);
    std::sort(order.begin(), order.end());
    for (auto k : order) out.sparse_.push_back({k, row[k]});
    out.offsets_[j + 1] = out.sparse_.size();
  }
  for (ItemIndex j = 0; j < n; ++j) {
    double sum = 0.0, magnitude = 0.0;
    for (const auto& nb : out.neighbors(j)) {
      sum += nb.similarity;
      magnitude += std::abs(nb.similarity);
    }
    out.row_sums_[j] = settle_zero(sum, magnitude);
  }
  out.dense_.clear();
  out.dense_.shrink_to_fit();
  return out;
}

double SimilarityMatrix::at(ItemIndex j, ItemIndex k) const {
  if (!truncated_) return dense_[j * n_ + k];
  auto nb = neighbors(j);
  auto it = std::lower_bound(nb.begin(), nb.end(), k,
                             [](const Neighbor& a, ItemIndex item) { return a.item < item; });
  return it != nb.end() && it->item == k ? it->similarity : 0.0;
}

std::span<const Neighbor> SimilarityMatrix::neighbors(ItemIndex j) const {
  return {sparse_.data() + offsets_.at(j), offsets_.at(j + 1) - offsets_.at(j)};
}

SimilarityMatrix materialize(const SimilarityModel& model) {
  const auto& cfg = model.config();
  const auto inter = interaction_kernel_matrix(model.train(), cfg.interaction_kernel);
  if (cfg.theta == 0.0) {
    return SimilarityMatrix::blend(0.0, nullptr, inter, model.neighbor_limit());
  }
  const auto side = side_kernel_matrix(*model.features(), cfg.side_kernel);
  return SimilarityMatrix::blend(cfg.theta, &side, inter, model.neighbor_limit());
}

}  // namespace aesthrec::sim
