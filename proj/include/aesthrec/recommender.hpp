#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "aesthrec/dataset.hpp"
#include "aesthrec/similarity.hpp"

namespace aesthrec::rec {

using dataset::InteractionMatrix;
using dataset::ItemIndex;
using dataset::UserIndex;

enum class RecommenderKind { kRandom, kPopular, kItemNN };

struct RecommenderSpec {
  RecommenderKind kind = RecommenderKind::kPopular;
  std::uint64_t seed = 0;                                  // kRandom
  std::shared_ptr<const sim::SimilarityMatrix> similarity;  // kItemNN
  bool normalize = false;                                  // kItemNN

  static RecommenderSpec random(std::uint64_t seed);
  static RecommenderSpec popular();
  // Materializes the model's similarity once.
  static RecommenderSpec item_nn(const sim::SimilarityModel& model, bool normalize = false);
  static RecommenderSpec item_nn(std::shared_ptr<const sim::SimilarityMatrix> similarity,
                                 bool normalize = false);
};

struct RankedEntry {
  ItemIndex item = 0;
  double score = 0.0;
};

// Nonincreasing scores, ties by ascending item index, no train items.
struct RankedList {
  std::string user_id;
  UserIndex user = 0;
  std::vector<RankedEntry> entries;
};

// Random-baseline score in [0, 1) from a stateless hash of (seed, user, item).
double random_score(std::uint64_t seed, UserIndex user, ItemIndex item) noexcept;

// Scores and ranks with one spec over one training matrix.
class Recommender {
 public:
  Recommender(RecommenderSpec spec, std::shared_ptr<const InteractionMatrix> train);

  const RecommenderSpec& spec() const noexcept { return spec_; }
  const InteractionMatrix& train() const noexcept { return *train_; }

  // ItemNN: sum over the user's train items k != j of Sim(j, k); the
  // normalized variant divides by the sum of Sim(j, k) over all k != j and
  // yields 0 on a zero denominator. Popular: train like count. Random: hash.
  double score(UserIndex user, ItemIndex item) const;
  // Scores for every item (train items included).
  std::vector<double> score_all(UserIndex user) const;

  // Top-k items outside the user's train row.
  RankedList rank(UserIndex user, std::size_t k) const;
  // Throws kUnknownUser listing every token missing from the user map.
  std::vector<RankedList> rank_all(std::span<const std::string> users, std::size_t k) const;

 private:
  RecommenderSpec spec_;
  std::shared_ptr<const InteractionMatrix> train_;
};

// Convenience wrappers building a one-off Recommender.
double score(const RecommenderSpec& spec, std::shared_ptr<const InteractionMatrix> train,
             UserIndex user, ItemIndex item);
RankedList rank(const RecommenderSpec& spec, std::shared_ptr<const InteractionMatrix> train,
                UserIndex user, std::size_t k);

// `user_id<TAB>rank<TAB>photo_id<TAB>score`, rank starting at 1.
void write_ranked_lists(std::span<const RankedList> lists, const dataset::IndexMap& items,
                        std::ostream& out);

}  // namespace aesthrec::rec
