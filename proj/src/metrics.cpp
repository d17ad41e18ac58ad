#include <algorithm>

#include "aesthrec/error.hpp"
#include "aesthrec/eval.hpp"

namespace aesthrec::eval {

RelevantSet::RelevantSet(std::span<const ItemIndex> items) : items_(items.begin(), items.end()) {
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool RelevantSet::contains(ItemIndex item) const {
  return std::binary_search(items_.begin(), items_.end(), item);
}

namespace {

std::size_t hits_in_prefix(std::span<const ItemIndex> ranked, const RelevantSet& relevant,
                           std::size_t depth) {
  const std::size_t limit = std::min(depth, ranked.size());
  std::size_t hits = 0;
  for (std::size_t r = 0; r < limit; ++r) {
    if (relevant.contains(ranked[r])) ++hits;
  }
  return hits;
}

}  // namespace

double precision_at_k(std::span<const ItemIndex> ranked, const RelevantSet& relevant,
                      std::size_t k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (relevant.empty()) return 0.0;
  return static_cast<double>(hits_in_prefix(ranked, relevant, k)) / static_cast<double>(k);
}

double r_precision(std::span<const ItemIndex> ranked, const RelevantSet& relevant) {
  if (relevant.empty()) return 0.0;
  const std::size_t r = relevant.size();
  return static_cast<double>(hits_in_prefix(ranked, relevant, r)) / static_cast<double>(r);
}

double average_precision(std::span<const ItemIndex> ranked, const RelevantSet& relevant) {
  if (relevant.empty()) return 0.0;
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    if (relevant.contains(ranked[r])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
  }
  return sum / static_cast<double>(relevant.size());
}

std::vector<ItemIndex> ranked_items(const rec::RankedList& list) {
  std::vector<ItemIndex> out;
  out.reserve(list.entries.size());
  for (const auto& e : list.entries) out.push_back(e.item);
  return out;
}

}  // namespace aesthrec::eval
