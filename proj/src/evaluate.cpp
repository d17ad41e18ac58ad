#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "aesthrec/error.hpp"
#include "aesthrec/eval.hpp"
#include "aesthrec/parallel.hpp"

namespace aesthrec::eval {

Metric parse_metric(std::string_view text) {
  if (text == "r-precision" || text == "rprecision") return Metric::kRPrecision;
  if (text == "average-precision" || text == "ap") return Metric::kAveragePrecision;
  if (text.starts_with("precision@") || text == "precision") return Metric::kPrecisionAtK;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown metric '" + std::string(text) +
                  "' (expected precision@k|r-precision|average-precision)");
}

std::string metric_name(Metric metric, std::size_t k) {
  switch (metric) {
    case Metric::kPrecisionAtK: return "precision@" + std::to_string(k);
    case Metric::kRPrecision: return "r_precision";
    case Metric::kAveragePrecision: return "average_precision";
  }
  return "unknown";
}

std::string_view to_string(Phase phase) noexcept {
  return phase == Phase::kValidation ? "validation" : "test";
}

Phase parse_phase(std::string_view text) {
  if (text == "validation" || text == "valid") return Phase::kValidation;
  if (text == "test") return Phase::kTest;
  throw Error(ErrorCode::kInvalidArgument, "unknown phase '" + std::string(text) + "'");
}

std::string_view to_string(CiMethod method) noexcept {
  return method == CiMethod::kStudentT ? "student-t" : "normal";
}

double PhaseMetrics::get(Metric metric) const {
  switch (metric) {
    case Metric::kPrecisionAtK: return precision_at_k;
    case Metric::kRPrecision: return r_precision;
    case Metric::kAveragePrecision: return average_precision;
  }
  return 0.0;
}

std::size_t ranking_depth(std::size_t relevant, std::size_t k) noexcept {
  return std::max({std::size_t{100}, 10 * relevant, k});
}

PhaseMetrics evaluate(const rec::Recommender& recommender,
                      const dataset::InteractionMatrix& held_out, std::size_t k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  const auto& train = recommender.train();
  if (held_out.user_map() != train.user_map() || held_out.item_map() != train.item_map()) {
    throw Error(ErrorCode::kInvalidArgument, "held-out matrix must share the train index maps");
  }
  std::vector<dataset::UserIndex> eligible;
  for (dataset::UserIndex u = 0; u < held_out.num_users(); ++u) {
    if (!held_out.row(u).empty()) eligible.push_back(u);
  }
  if (eligible.empty()) {
    throw Error(ErrorCode::kEmptyEvaluation, "no user has held-out positives");
  }

  struct UserScores {
    double p, rp, ap;
  };
  std::vector<UserScores> per_user(eligible.size());
  parallel_for(eligible.size(), [&](std::size_t i) {
    const auto u = eligible[i];
    std::vector<ItemIndex> items;
    for (const auto& cell : held_out.row(u)) items.push_back(cell.item);
    const RelevantSet relevant(items);
    const auto list = recommender.rank(u, ranking_depth(relevant.size(), k));
    const auto ranked = ranked_items(list);
    per_user[i] = {precision_at_k(ranked, relevant, k), r_precision(ranked, relevant),
                   average_precision(ranked, relevant)};
  });

  PhaseMetrics out;
  out.k = k;
  out.users = eligible.size();
  for (const auto& s : per_user) {
    out.precision_at_k += s.p;
    out.r_precision += s.rp;
    out.average_precision += s.ap;
  }
  const double n = static_cast<double>(eligible.size());
  out.precision_at_k /= n;
  out.r_precision /= n;
  out.average_precision /= n;
  return out;
}

PhaseMetrics evaluate(const rec::RecommenderSpec& spec, const dataset::SplitTriple& split,
                      Phase phase, std::size_t k) {
  auto train = std::make_shared<const dataset::InteractionMatrix>(split.train);
  const rec::Recommender recommender(spec, train);
  return evaluate(recommender, phase == Phase::kValidation ? split.validation : split.test, k);
}

Interval aggregate_ci(std::span<const double> values, CiMethod method) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "confidence interval needs at least 2 values");
  }
  // Sorted copy so the result does not depend on input order.
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  double q;
  if (method == CiMethod::kStudentT) {
    const boost::math::students_t dist(static_cast<double>(n - 1));
    q = boost::math::quantile(dist, 0.975);
  } else {
    q = boost::math::quantile(boost::math::normal(), 0.975);
  }
  return {mean, q * sd / std::sqrt(static_cast<double>(n))};
}

FeatureProvider table_features(std::shared_ptr<const FeatureTable> table) {
  return [table](const dataset::SplitTriple& split) -> std::shared_ptr<const sim::ItemFeatures> {
    if (!table) return nullptr;
    return std::make_shared<const sim::ItemFeatures>(*table, split.train.items());
  };
}

FeatureProvider metadata_features(
    std::shared_ptr<const std::vector<dataset::MetadataRecord>> records) {
  return [records](const dataset::SplitTriple& split) -> std::shared_ptr<const sim::ItemFeatures> {
    if (!records) return nullptr;
    const auto& train = split.train;
    std::vector<dataset::MetadataRecord> train_records;
    for (const auto& r : *records) {
      auto j = train.items().find(r.photo_id);
      if (j && !train.column(*j).empty()) train_records.push_back(r);
    }
    const auto vocab = dataset::metadata_vocabulary(train_records);
    auto table = dataset::metadata_to_features(*records, vocab);
    // Photos without a record carry no tokens.
    for (const auto& id : train.items().tokens()) {
      if (!table.contains(id)) table.insert(id, std::vector<float>(table.dimension(), 0.0f));
    }
    return std::make_shared<const sim::ItemFeatures>(table, train.items());
  };
}

rec::RecommenderSpec build_spec(const ModelDescription& model, const dataset::SplitTriple& split,
                                const FeatureProvider& features) {
  switch (model.kind) {
    case rec::RecommenderKind::kRandom: return rec::RecommenderSpec::random(model.seed);
    case rec::RecommenderKind::kPopular: return rec::RecommenderSpec::popular();
    case rec::RecommenderKind::kItemNN: break;
  }
  std::shared_ptr<const sim::ItemFeatures> side;
  if (model.blend.theta > 0.0) {
    side = features ? features(split) : nullptr;
    if (!side) {
      throw Error(ErrorCode::kInvalidArgument, "theta > 0 requires side-information features");
    }
  }
  const sim::SimilarityModel sim_model(
      model.blend, std::make_shared<const dataset::InteractionMatrix>(split.train), side,
      model.options.neighbor_limit);
  return rec::RecommenderSpec::item_nn(sim_model, model.options.normalize);
}

EvalReport evaluate_splits(const ModelDescription& model,
                           std::span<const dataset::SplitTriple> splits,
                           const FeatureProvider& features, Phase phase, std::size_t k,
                           CiMethod ci) {
  if (splits.empty()) throw Error(ErrorCode::kInvalidArgument, "no splits to evaluate");
  EvalReport report;
  report.model = model;
  report.phase = phase;
  report.k = k;
  report.ci = ci;
  for (const auto& split : splits) {
    report.splits.push_back(evaluate(build_spec(model, split, features), split, phase, k));
  }

  std::vector<double> p, rp, ap;
  std::size_t users = 0;
  for (const auto& s : report.splits) {
    p.push_back(s.precision_at_k);
    rp.push_back(s.r_precision);
    ap.push_back(s.average_precision);
    users += s.users;
  }
  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  report.mean = {mean(p), mean(rp), mean(ap), users, k};
  if (splits.size() >= 2) {
    const auto ip = aggregate_ci(p, ci);
    const auto irp = aggregate_ci(rp, ci);
    const auto iap = aggregate_ci(ap, ci);
    report.mean = {ip.mean, irp.mean, iap.mean, users, k};
    report.ci95 = PhaseMetrics{ip.halfwidth, irp.halfwidth, iap.halfwidth, users, k};
  }
  return report;
}

namespace {

std::string_view kind_name(rec::RecommenderKind kind) {
  switch (kind) {
    case rec::RecommenderKind::kRandom: return "random";
    case rec::RecommenderKind::kPopular: return "popular";
    case rec::RecommenderKind::kItemNN: return "itemnn";
  }
  return "unknown";
}

nlohmann::ordered_json metrics_json(const PhaseMetrics& m) {
  nlohmann::ordered_json j;
  j[metric_name(Metric::kPrecisionAtK, m.k)] = m.precision_at_k;
  j[metric_name(Metric::kRPrecision, m.k)] = m.r_precision;
  j[metric_name(Metric::kAveragePrecision, m.k)] = m.average_precision;
  return j;
}

}  // namespace

nlohmann::ordered_json to_json(const EvalReport& report,
                               const nlohmann::ordered_json& extra_config) {
  nlohmann::ordered_json config;
  config["kind"] = kind_name(report.model.kind);
  if (report.model.kind == rec::RecommenderKind::kRandom) config["seed"] = report.model.seed;
  if (report.model.kind == rec::RecommenderKind::kItemNN) {
    config["theta"] = report.model.blend.theta;
    config["side_kernel"] = to_string(report.model.blend.side_kernel);
    config["interaction_kernel"] = to_string(report.model.blend.interaction_kernel);
    config["normalize"] = report.model.options.normalize;
    if (report.model.options.neighbor_limit) {
      config["neighbor_limit"] = *report.model.options.neighbor_limit;
    } else {
      config["neighbor_limit"] = nullptr;
    }
  }
  config["phase"] = to_string(report.phase);
  config["k"] = report.k;
  config["ranking_depth"] = "max(100, 10*|relevant|, k)";
  config["ci_method"] = to_string(report.ci);
  for (const auto& [key, value] : extra_config.items()) config[key] = value;

  nlohmann::ordered_json splits = nlohmann::ordered_json::array();
  for (std::size_t s = 0; s < report.splits.size(); ++s) {
    auto entry = metrics_json(report.splits[s]);
    entry["split"] = s;
    entry["users"] = report.splits[s].users;
    splits.push_back(std::move(entry));
  }

  nlohmann::ordered_json out;
  out["model"] = report.model.name;
  out["config"] = std::move(config);
  out["splits"] = std::move(splits);
  out["mean"] = metrics_json(report.mean);
  out["ci95"] = report.ci95 ? metrics_json(*report.ci95) : nlohmann::ordered_json(nullptr);
  return out;
}

TuneGrid TuneGrid::defaults() {
  return {{0.0, 0.01, 0.02, 0.04, 0.08, 0.1, 0.2, 0.4, 0.8, 1.0},
          {kAllKernels[0], kAllKernels[1], kAllKernels[2]},
          {kAllKernels[0], kAllKernels[1], kAllKernels[2]}};
}

TuneResult tune(const TuneGrid& grid, std::span<const dataset::SplitTriple> splits,
                const FeatureProvider& features, Metric objective, std::size_t k,
                const ModelOptions& options) {
  if (grid.thetas.empty() || grid.side_kernels.empty() || grid.interaction_kernels.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "tuning grid has an empty axis");
  }
  if (splits.empty()) throw Error(ErrorCode::kInvalidArgument, "no splits to tune on");

  // Canonical order makes "first maximum wins" implement the tie rule.
  auto thetas = grid.thetas;
  auto sides = grid.side_kernels;
  auto inters = grid.interaction_kernels;
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
  std::sort(sides.begin(), sides.end());
  sides.erase(std::unique(sides.begin(), sides.end()), sides.end());
  std::sort(inters.begin(), inters.end());
  inters.erase(std::unique(inters.begin(), inters.end()), inters.end());
  for (double t : thetas) sim::BlendConfig{t}.validate();
  const bool needs_side = thetas.back() > 0.0;

  std::vector<TuneCell> cells;
  for (double t : thetas) {
    for (auto s : sides) {
      for (auto i : inters) cells.push_back({{t, s, i}, {}, 0.0});
    }
  }

  for (const auto& split : splits) {
    auto train = std::make_shared<const dataset::InteractionMatrix>(split.train);
    const auto& held_out = split.validation;
    std::map<Kernel, sim::KernelMatrix> inter_matrices;
    for (auto i : inters) inter_matrices.emplace(i, sim::interaction_kernel_matrix(*train, i));
    std::map<Kernel, sim::KernelMatrix> side_matrices;
    if (needs_side) {
      auto side = features ? features(split) : nullptr;
      if (!side) {
        throw Error(ErrorCode::kInvalidArgument, "theta > 0 requires side-information features");
      }
      for (auto s : sides) side_matrices.emplace(s, sim::side_kernel_matrix(*side, s));
    }

    std::map<Kernel, double> theta_zero;  // side kernel is irrelevant at theta = 0
    for (auto& cell : cells) {
      const auto& cfg = cell.config;
      if (cfg.theta == 0.0) {
        if (auto it = theta_zero.find(cfg.interaction_kernel); it != theta_zero.end()) {
          cell.per_split.push_back(it->second);
          continue;
        }
      }
      const sim::KernelMatrix* side =
          cfg.theta > 0.0 ? &side_matrices.at(cfg.side_kernel) : nullptr;
      auto matrix = std::make_shared<const sim::SimilarityMatrix>(sim::SimilarityMatrix::blend(
          cfg.theta, side, inter_matrices.at(cfg.interaction_kernel), options.neighbor_limit));
      const rec::Recommender recommender(rec::RecommenderSpec::item_nn(matrix, options.normalize),
                                         train);
      const double value = evaluate(recommender, held_out, k).get(objective);
      cell.per_split.push_back(value);
      if (cfg.theta == 0.0) theta_zero.emplace(cfg.interaction_kernel, value);
    }
  }

  TuneResult result;
  bool first = true;
  for (auto& cell : cells) {
    cell.mean = std::accumulate(cell.per_split.begin(), cell.per_split.end(), 0.0) /
                static_cast<double>(cell.per_split.size());
    if (first || cell.mean > result.best_objective) {
      result.best = cell.config;
      result.best_objective = cell.mean;
      first = false;
    }
  }
  result.cells = std::move(cells);
  return result;
}

}  // namespace aesthrec::eval
