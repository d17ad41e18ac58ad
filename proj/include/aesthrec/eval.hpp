#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "aesthrec/dataset.hpp"
#include "aesthrec/recommender.hpp"
#include "aesthrec/similarity.hpp"

namespace aesthrec::eval {

using dataset::ItemIndex;

// Sorted, deduplicated set of held-out positive items for one user.
class RelevantSet {
 public:
  RelevantSet() = default;
  explicit RelevantSet(std::span<const ItemIndex> items);

  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  bool contains(ItemIndex item) const;

 private:
  std::vector<ItemIndex> items_;
};

// |top-k ∩ relevant| / k. The divisor stays k when the list is shorter.
double precision_at_k(std::span<const ItemIndex> ranked, const RelevantSet& relevant,
                      std::size_t k);
// Precision at R = |relevant|.
double r_precision(std::span<const ItemIndex> ranked, const RelevantSet& relevant);
// Mean over relevant items of the precision at each one's rank; relevant
// items missing from the list contribute 0.
double average_precision(std::span<const ItemIndex> ranked, const RelevantSet& relevant);

std::vector<ItemIndex> ranked_items(const rec::RankedList& list);

enum class Metric { kPrecisionAtK, kRPrecision, kAveragePrecision };

// "precision@k" | "r-precision" | "average-precision" (also "ap").
Metric parse_metric(std::string_view text);
std::string metric_name(Metric metric, std::size_t k);

enum class Phase { kValidation, kTest };
std::string_view to_string(Phase phase) noexcept;
Phase parse_phase(std::string_view text);

// Unweighted means over users with at least one positive in the phase.
struct PhaseMetrics {
  double precision_at_k = 0.0;
  double r_precision = 0.0;
  double average_precision = 0.0;
  std::size_t users = 0;
  std::size_t k = 10;

  double get(Metric metric) const;
};

// Length of the ranked list generated per user: max(100, 10 |relevant|, k).
std::size_t ranking_depth(std::size_t relevant, std::size_t k) noexcept;

// Ranks every user of `held_out` that has positives against the
// recommender's train matrix. Both matrices must share index maps. Throws
// kEmptyEvaluation when no user is eligible.
PhaseMetrics evaluate(const rec::Recommender& recommender,
                      const dataset::InteractionMatrix& held_out, std::size_t k);

// Validation phase reads only split.train and split.validation; test phase
// only split.train and split.test.
PhaseMetrics evaluate(const rec::RecommenderSpec& spec, const dataset::SplitTriple& split,
                      Phase phase, std::size_t k);

enum class CiMethod { kStudentT, kNormal };
std::string_view to_string(CiMethod method) noexcept;

struct Interval {
  double mean = 0.0;
  double halfwidth = 0.0;
};

// mean ± q * s / sqrt(n) with q the two-sided 95% quantile of Student-t
// with n-1 degrees of freedom (or the standard normal). Needs n >= 2.
Interval aggregate_ci(std::span<const double> per_split, CiMethod method = CiMethod::kStudentT);

// Supplies side features aligned with a split's item map; may return null
// when the model uses none.
using FeatureProvider =
    std::function<std::shared_ptr<const sim::ItemFeatures>(const dataset::SplitTriple&)>;

// Features from one table for every split.
FeatureProvider table_features(std::shared_ptr<const FeatureTable> table);
// Metadata multi-hot with the vocabulary taken from each split's train items.
FeatureProvider metadata_features(std::shared_ptr<const std::vector<dataset::MetadataRecord>> records);

struct ModelOptions {
  bool normalize = false;
  std::optional<std::size_t> neighbor_limit;
};

struct ModelDescription {
  std::string name = "popular";
  rec::RecommenderKind kind = rec::RecommenderKind::kPopular;
  std::uint64_t seed = 0;
  sim::BlendConfig blend;
  ModelOptions options;
};

rec::RecommenderSpec build_spec(const ModelDescription& model, const dataset::SplitTriple& split,
                                const FeatureProvider& features);

struct EvalReport {
  ModelDescription model;
  Phase phase = Phase::kTest;
  std::size_t k = 10;
  CiMethod ci = CiMethod::kStudentT;
  std::vector<PhaseMetrics> splits;
  PhaseMetrics mean;
  // Present with two or more splits.
  std::optional<PhaseMetrics> ci95;
};

EvalReport evaluate_splits(const ModelDescription& model, std::span<const dataset::SplitTriple> splits,
                           const FeatureProvider& features, Phase phase, std::size_t k,
                           CiMethod ci = CiMethod::kStudentT);

// Fields `model`, `config`, `splits`, `mean`, `ci95`. `extra_config` entries
// are merged into `config`.
nlohmann::ordered_json to_json(const EvalReport& report,
                               const nlohmann::ordered_json& extra_config = nlohmann::ordered_json::object());

struct TuneGrid {
  std::vector<double> thetas;
  std::vector<Kernel> side_kernels;
  std::vector<Kernel> interaction_kernels;

  // {0, 0.01, 0.02, 0.04, 0.08, 0.1, 0.2, 0.4, 0.8, 1.0} x all kernels.
  static TuneGrid defaults();
};

struct TuneCell {
  sim::BlendConfig config;
  std::vector<double> per_split;
  double mean = 0.0;
};

struct TuneResult {
  sim::BlendConfig best;
  double best_objective = 0.0;
  std::vector<TuneCell> cells;  // grid order: theta, side kernel, interaction kernel
};

// Picks the configuration with the highest mean validation objective across
// splits; ties go to the smaller theta, then kernel order.
TuneResult tune(const TuneGrid& grid, std::span<const dataset::SplitTriple> splits,
                const FeatureProvider& features, Metric objective, std::size_t k,
                const ModelOptions& options = {});

}  // namespace aesthrec::eval
