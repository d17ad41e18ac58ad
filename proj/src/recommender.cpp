#include "aesthrec/recommender.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>

#include "aesthrec/error.hpp"
#include "aesthrec/parallel.hpp"

namespace aesthrec::rec {

RecommenderSpec RecommenderSpec::random(std::uint64_t seed) {
  RecommenderSpec spec;
  spec.kind = RecommenderKind::kRandom;
  spec.seed = seed;
  return spec;
}

RecommenderSpec RecommenderSpec::popular() {
  RecommenderSpec spec;
  spec.kind = RecommenderKind::kPopular;
  return spec;
}

RecommenderSpec RecommenderSpec::item_nn(const sim::SimilarityModel& model, bool normalize) {
  return item_nn(std::make_shared<const sim::SimilarityMatrix>(sim::materialize(model)),
                 normalize);
}

RecommenderSpec RecommenderSpec::item_nn(std::shared_ptr<const sim::SimilarityMatrix> similarity,
                                         bool normalize) {
  if (!similarity) throw Error(ErrorCode::kInvalidArgument, "item-NN needs a similarity matrix");
  RecommenderSpec spec;
  spec.kind = RecommenderKind::kItemNN;
  spec.similarity = std::move(similarity);
  spec.normalize = normalize;
  return spec;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double random_score(std::uint64_t seed, UserIndex user, ItemIndex item) noexcept {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ (static_cast<std::uint64_t>(user) << 32 | item));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

Recommender::Recommender(RecommenderSpec spec, std::shared_ptr<const InteractionMatrix> train)
    : spec_(std::move(spec)), train_(std::move(train)) {
  if (!train_) throw Error(ErrorCode::kInvalidArgument, "recommender needs a train matrix");
  if (spec_.kind == RecommenderKind::kItemNN) {
    if (!spec_.similarity) {
      throw Error(ErrorCode::kInvalidArgument, "item-NN needs a similarity matrix");
    }
    if (spec_.similarity->num_items() != train_->num_items()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "similarity matrix does not match the train item count");
    }
  }
}

double Recommender::score(UserIndex user, ItemIndex item) const {
  if (user >= train_->num_users() || item >= train_->num_items()) {
    throw Error(ErrorCode::kInvalidArgument, "user or item index out of range");
  }
  switch (spec_.kind) {
    case RecommenderKind::kRandom:
      return random_score(spec_.seed, user, item);
    case RecommenderKind::kPopular:
      return static_cast<double>(train_->column(item).size());
    case RecommenderKind::kItemNN:
      break;
  }
  const auto& sim = *spec_.similarity;
  double total = 0.0;
  for (const auto& cell : train_->row(user)) {
    if (cell.item != item) total += sim.at(item, cell.item);
  }
  if (!spec_.normalize) return total;
  const double denom = sim.row_sum(item);
  return denom == 0.0 ? 0.0 : total / denom;
}

std::vector<double> Recommender::score_all(UserIndex user) const {
  if (user >= train_->num_users()) {
    throw Error(ErrorCode::kInvalidArgument, "user index out of range");
  }
  const std::size_t n = train_->num_items();
  std::vector<double> scores(n, 0.0);
  switch (spec_.kind) {
    case RecommenderKind::kRandom:
      for (ItemIndex j = 0; j < n; ++j) scores[j] = random_score(spec_.seed, user, j);
      return scores;
    case RecommenderKind::kPopular:
      for (ItemIndex j = 0; j < n; ++j) scores[j] = static_cast<double>(train_->column(j).size());
      return scores;
    case RecommenderKind::kItemNN:
      break;
  }

  // Accumulates in ascending order of the user's items, as score() does, so
  // both paths agree bit for bit.
  const auto& sim = *spec_.similarity;
  const auto row = train_->row(user);
  if (sim.is_dense()) {
    for (const auto& cell : row) {
      for (ItemIndex j = 0; j < n; ++j) {
        if (j != cell.item) scores[j] += sim.at(j, cell.item);
      }
    }
  } else {
    std::vector<bool> liked(n, false);
    for (const auto& cell : row) liked[cell.item] = true;
    for (ItemIndex j = 0; j < n; ++j) {
      for (const auto& nb : sim.neighbors(j)) {
        if (liked[nb.item] && nb.item != j) scores[j] += nb.similarity;
      }
    }
  }
  if (spec_.normalize) {
    for (ItemIndex j = 0; j < n; ++j) {
      const double denom = sim.row_sum(j);
      scores[j] = denom == 0.0 ? 0.0 : scores[j] / denom;
    }
  }
  return scores;
}

RankedList Recommender::rank(UserIndex user, std::size_t k) const {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  const auto scores = score_all(user);
  std::vector<ItemIndex> candidates;
  candidates.reserve(scores.size());
  const auto row = train_->row(user);
  auto cell = row.begin();
  for (ItemIndex j = 0; j < scores.size(); ++j) {
    if (cell != row.end() && cell->item == j) {
      ++cell;
      continue;
    }
    candidates.push_back(j);
  }
  const std::size_t keep = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), [&](ItemIndex a, ItemIndex b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  RankedList out{train_->users().token(user), user, {}};
  out.entries.reserve(keep);
  for (std::size_t r = 0; r < keep; ++r) out.entries.push_back({candidates[r], scores[candidates[r]]});
  return out;
}

std::vector<RankedList> Recommender::rank_all(std::span<const std::string> users,
                                              std::size_t k) const {
  std::vector<UserIndex> indices;
  std::string unknown;
  for (const auto& token : users) {
    if (auto u = train_->users().find(token)) {
      indices.push_back(*u);
    } else {
      unknown += (unknown.empty() ? "" : ", ") + token;
    }
  }
  if (!unknown.empty()) throw Error(ErrorCode::kUnknownUser, "unknown users: " + unknown);
  std::vector<RankedList> out(indices.size());
  parallel_for(indices.size(), [&](std::size_t i) { out[i] = rank(indices[i], k); });
  return out;
}

double score(const RecommenderSpec& spec, std::shared_ptr<const InteractionMatrix> train,
             UserIndex user, ItemIndex item) {
  return Recommender(spec, std::move(train)).score(user, item);
}

RankedList rank(const RecommenderSpec& spec, std::shared_ptr<const InteractionMatrix> train,
                UserIndex user, std::size_t k) {
  return Recommender(spec, std::move(train)).rank(user, k);
}

void write_ranked_lists(std::span<const RankedList> lists, const dataset::IndexMap& items,
                        std::ostream& out) {
  char buf[64];
  for (const auto& list : lists) {
    for (std::size_t r = 0; r < list.entries.size(); ++r) {
      const auto& e = list.entries[r];
      auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), e.score);
      out << list.user_id << '\t' << (r + 1) << '\t' << items.token(e.item) << '\t'
          << std::string_view(buf, static_cast<std::size_t>(end - buf)) << '\n';
    }
  }
}

}  // namespace aesthrec::rec
