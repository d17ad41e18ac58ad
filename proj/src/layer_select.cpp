#include "aesthrec/layer_select.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "aesthrec/error.hpp"

namespace aesthrec::style {

AestheticSets::AestheticSets(std::vector<std::vector<std::string>> groups)
    : groups_(std::move(groups)) {
  std::vector<std::pair<std::string, std::size_t>> members;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    if (groups_[g].size() < 2) {
      throw Error(ErrorCode::kValidation,
                  "aesthetic set " + std::to_string(g) + " has fewer than 2 photos");
    }
    for (const auto& id : groups_[g]) members.emplace_back(id, g);
  }
  std::sort(members.begin(), members.end());
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (members[i].first == members[i - 1].first) {
      throw Error(ErrorCode::kValidation,
                  "photo '" + members[i].first + "' appears in more than one aesthetic set");
    }
  }
  for (auto& [id, g] : members) {
    photos_.push_back(id);
    group_of_.push_back(g);
  }
}

std::size_t AestheticSets::pair_count() const noexcept {
  const std::size_t n = photos_.size();
  return n * (n - 1) / 2;
}

std::size_t AestheticSets::within_pair_count() const noexcept {
  std::size_t total = 0;
  for (const auto& g : groups_) total += g.size() * (g.size() - 1) / 2;
  return total;
}

AestheticSets parse_aesthetic_sets(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("aesthetic sets: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::kParse, "aesthetic sets must be a JSON array");
  std::vector<std::vector<std::string>> groups;
  for (const auto& group : doc) {
    if (!group.is_array()) {
      throw Error(ErrorCode::kParse, "each aesthetic set must be an array of photo ids");
    }
    auto& out = groups.emplace_back();
    for (const auto& id : group) {
      if (!id.is_string()) throw Error(ErrorCode::kParse, "photo ids must be strings");
      out.push_back(id.get<std::string>());
    }
  }
  return AestheticSets(std::move(groups));
}

AestheticSets load_aesthetic_sets(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_aesthetic_sets(text.str());
}

std::vector<double> topk_pair_precision(const FeatureTable& table, const AestheticSets& sets,
                                        Kernel kernel, std::span<const std::size_t> ks) {
  const auto& photos = sets.photos();
  const std::size_t pairs = sets.pair_count();
  for (auto k : ks) {
    if (k < 1 || k > pairs) {
      throw Error(ErrorCode::kInvalidArgument,
                  "k=" + std::to_string(k) + " outside [1, " + std::to_string(pairs) + "]");
    }
  }
  std::vector<std::span<const float>> vectors;
  vectors.reserve(photos.size());
  for (const auto& id : photos) {
    auto v = table.find(id);
    if (!v) throw MissingFeatureError(id);
    vectors.push_back(*v);
  }

  struct Pair {
    double sim;
    std::uint32_t a, b;  // ranks into photos(), a < b
  };
  std::vector<Pair> ranked;
  ranked.reserve(pairs);
  for (std::uint32_t a = 0; a < photos.size(); ++a) {
    for (std::uint32_t b = a + 1; b < photos.size(); ++b) {
      ranked.push_back({similarity(kernel, vectors[a], vectors[b]), a, b});
    }
  }
  // photos() is sorted, so rank order is lexicographic id order.
  std::sort(ranked.begin(), ranked.end(), [](const Pair& x, const Pair& y) {
    if (x.sim != y.sim) return x.sim > y.sim;
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });

  std::vector<std::size_t> within_prefix(ranked.size() + 1, 0);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const bool same = sets.group_of(ranked[i].a) == sets.group_of(ranked[i].b);
    within_prefix[i + 1] = within_prefix[i] + (same ? 1 : 0);
  }
  std::vector<double> out;
  for (auto k : ks) {
    out.push_back(static_cast<double>(within_prefix[k]) / static_cast<double>(k));
  }
  return out;
}

double LayerKernelResult::mean_precision() const {
  if (precision.empty()) return 0.0;
  return std::accumulate(precision.begin(), precision.end(), 0.0) /
         static_cast<double>(precision.size());
}

std::vector<LayerKernelResult> pairwise_topk_precision(const std::map<int, FeatureTable>& tables,
                                                       const AestheticSets& sets,
                                                       std::span<const Kernel> kernels,
                                                       std::span<const std::size_t> ks) {
  std::vector<LayerKernelResult> results;
  for (const auto& [layer, table] : tables) {
    for (auto kernel : kernels) {
      results.push_back({layer, kernel, {ks.begin(), ks.end()},
                         topk_pair_precision(table, sets, kernel, ks)});
    }
  }
  return results;
}

BestConfiguration select_best_configuration(std::span<const LayerKernelResult> results) {
  if (results.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no layer/kernel results to select from");
  }
  std::optional<BestConfiguration> best;
  for (const auto& r : results) {
    const BestConfiguration cand{r.layer, r.kernel, r.mean_precision()};
    if (!best || cand.mean_precision > best->mean_precision ||
        (cand.mean_precision == best->mean_precision &&
         std::tie(cand.layer, cand.kernel) < std::tie(best->layer, best->kernel))) {
      best = cand;
    }
  }
  return *best;
}

}  // namespace aesthrec::style
