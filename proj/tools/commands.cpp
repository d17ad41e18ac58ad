#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "aesthrec/color.hpp"
#include "aesthrec/dataset.hpp"
#include "aesthrec/error.hpp"
#include "aesthrec/eval.hpp"
#include "aesthrec/feature_io.hpp"
#include "aesthrec/layer_select.hpp"
#include "aesthrec/recommender.hpp"
#include "aesthrec/style.hpp"

namespace aesthrec::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorCode::kInvalidArgument, message);
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, end};
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  for (const auto& tok : split_list(text)) {
    T value{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw Error(ErrorCode::kInvalidArgument, std::string("bad ") + what + " '" + tok + "'");
    }
    out.push_back(value);
  }
  require(!out.empty(), std::string("empty ") + what + " list");
  return out;
}

// Writes through a sibling temp file and renames into place.
void write_atomic(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << bytes;
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

fs::path manifest_path(const fs::path& out) {
  fs::path p = out;
  p += ".manifest.json";
  return p;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<dataset::SplitTriple> load_splits(const SplitSource& src) {
  if (!src.splits_dir.empty()) {
    require(src.train.empty() && src.valid.empty() && src.test.empty(),
            "use either --splits-dir or --train/--valid/--test");
    auto splits = dataset::load_split_dir(src.splits_dir);
    require(!splits.empty(), "split manifest lists no splits");
    return splits;
  }
  require(!src.train.empty() && !src.valid.empty() && !src.test.empty(),
          "need --splits-dir or all of --train, --valid, --test");
  const auto train = dataset::load_interactions(src.train);
  const auto valid = dataset::load_interactions(src.valid);
  const auto test = dataset::load_interactions(src.test);
  dataset::SplitBoundaries b;
  if (!valid.empty()) b.t1 = valid.front().timestamp;
  if (!test.empty()) b.t2 = test.front().timestamp;
  std::vector<dataset::SplitTriple> out;
  out.push_back(dataset::assemble_split(train, valid, test, b));
  return out;
}

json split_source_json(const SplitSource& src) {
  json j;
  if (!src.splits_dir.empty()) {
    j["splits_dir"] = src.splits_dir.string();
  } else {
    j["train"] = src.train.string();
    j["valid"] = src.valid.string();
    j["test"] = src.test.string();
  }
  return j;
}

eval::FeatureProvider load_side(const FeatureSource& side, json& config) {
  require(side.features.empty() || side.metadata.empty(),
          "use either --features or --metadata, not both");
  if (!side.features.empty()) {
    config["features"] = side.features.string();
    return eval::table_features(
        std::make_shared<const FeatureTable>(read_features(side.features)));
  }
  if (!side.metadata.empty()) {
    config["metadata"] = side.metadata.string();
    return eval::metadata_features(std::make_shared<const std::vector<dataset::MetadataRecord>>(
        dataset::load_metadata(side.metadata)));
  }
  return {};
}

eval::ModelDescription describe(const ModelArgs& args) {
  eval::ModelDescription m;
  if (args.model == "random") {
    m.kind = rec::RecommenderKind::kRandom;
  } else if (args.model == "popular") {
    m.kind = rec::RecommenderKind::kPopular;
  } else if (args.model == "itemnn") {
    m.kind = rec::RecommenderKind::kItemNN;
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown model '" + args.model + "' (expected random|popular|itemnn)");
  }
  m.name = args.name.empty() ? args.model : args.name;
  m.seed = args.seed;
  m.blend = {args.theta, parse_kernel(args.side_kernel), parse_kernel(args.interaction_kernel)};
  m.blend.validate();
  m.options.normalize = args.normalize;
  m.options.neighbor_limit = args.neighbors;
  require(!args.neighbors || *args.neighbors >= 1, "--neighbors must be >= 1");
  return m;
}

}  // namespace

void cmd_split(const SplitArgs& args) {
  require(!args.out.empty(), "--out is required");
  const auto interactions = dataset::load_interactions(args.interactions);
  const auto splits =
      dataset::temporal_split(interactions, args.num_splits, args.train_frac, args.valid_frac);

  const std::vector<std::string> config = {
      "command=split",
      "interactions=" + args.interactions.string(),
      "num_splits=" + std::to_string(args.num_splits),
      "train_frac=" + format_double(args.train_frac),
      "valid_frac=" + format_double(args.valid_frac),
      "windows=50%-overlapping sliding windows over the sorted timeline",
  };
  fs::path staging = args.out;
  staging += ".partial";
  fs::remove_all(staging);
  dataset::write_split_dir(staging, splits, config);
  fs::remove_all(args.out);
  fs::rename(staging, args.out);

  for (std::size_t s = 0; s < splits.size(); ++s) {
    const auto row = dataset::manifest_row(s, splits[s]);
    std::cout << "split " << s << ": t1=" << row.boundaries.t1 << " t2=" << row.boundaries.t2
              << " train=" << row.train << " validation=" << row.validation
              << " test=" << row.test << '\n';
  }
}

void cmd_color(const ColorArgs& args) {
  require(!args.out.empty(), "--out is required");
  const auto space = color::parse_color_space(args.space);
  const auto result = color::batch_extract(args.images, space, args.bins);

  std::ostringstream payload;
  write_features(result.table, payload);

  json manifest;
  manifest["command"] = "color";
  manifest["images"] = args.images.string();
  manifest["space"] = color::to_string(space);
  manifest["bins_per_channel"] = args.bins;
  manifest["dimension"] = result.table.dimension();
  manifest["records"] = result.table.size();
  json skipped = json::array();
  for (const auto& s : result.skipped) {
    skipped.push_back({{"file", s.path.filename().string()}, {"reason", s.reason}});
    std::cerr << "skipped " << s.path.filename().string() << ": " << s.reason << '\n';
  }
  manifest["skipped"] = std::move(skipped);

  write_atomic(args.out, payload.str());
  write_atomic(manifest_path(args.out), dump(manifest));
}

void cmd_gram(const GramArgs& args) {
  require(!args.out.empty(), "--out is required");
  require(!args.maps.empty(), "at least one feature-map file is required");
  std::vector<style::FeatureMap> maps;
  for (const auto& path : args.maps) {
    auto part = style::read_feature_maps(path);
    for (auto& m : part) {
      if (!args.layer || m.layer_index == *args.layer) maps.push_back(std::move(m));
    }
  }
  require(!maps.empty(), "no feature maps match the requested layer");
  std::set<int> layers;
  for (const auto& m : maps) layers.insert(m.layer_index);
  require(layers.size() == 1, "feature maps span several layers; select one with --layer");

  FeatureTable table;
  for (const auto& m : maps) {
    require(!table.contains(m.photo_id), "duplicate feature map for photo '" + m.photo_id + "'");
    auto g = style::gram(m);
    table.insert(std::move(g.photo_id), std::move(g.values));
  }

  std::ostringstream payload;
  write_features(table, payload);
  json manifest;
  manifest["command"] = "gram";
  json inputs = json::array();
  for (const auto& p : args.maps) inputs.push_back(p.string());
  manifest["maps"] = std::move(inputs);
  manifest["layer"] = *layers.begin();
  manifest["normalization"] = "F*F^T/(C*M)";
  manifest["dimension"] = table.dimension();
  manifest["records"] = table.size();

  write_atomic(args.out, payload.str());
  write_atomic(manifest_path(args.out), dump(manifest));
}

void cmd_layer_select(const LayerSelectArgs& args) {
  require(!args.out.empty(), "--out is required");
  require(!args.layer_files.empty(), "at least one --layer-file is required");
  std::map<int, FeatureTable> tables;
  std::map<int, std::string> paths;
  for (const auto& spec : args.layer_files) {
    const auto eq = spec.find('=');
    require(eq != std::string::npos, "--layer-file expects <layer>=<path>, got '" + spec + "'");
    int layer = 0;
    auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + eq, layer);
    require(ec == std::errc() && ptr == spec.data() + eq && layer >= 1,
            "bad layer index in '" + spec + "'");
    require(!tables.contains(layer), "layer " + std::to_string(layer) + " given twice");
    const fs::path path = spec.substr(eq + 1);
    tables.emplace(layer, read_features(path));
    paths.emplace(layer, path.string());
  }
  const auto sets = style::load_aesthetic_sets(args.sets);
  const auto ks = parse_list<std::size_t>(args.ks, "k");
  const auto kernels = parse_kernel_list(args.kernels);

  const auto results = style::pairwise_topk_precision(tables, sets, kernels, ks);
  const auto best = style::select_best_configuration(results);

  std::ostringstream csv;
  csv << "layer,kernel,k,precision\n";
  for (const auto& r : results) {
    for (std::size_t i = 0; i < r.ks.size(); ++i) {
      csv << r.layer << ',' << to_string(r.kernel) << ',' << r.ks[i] << ','
          << format_double(r.precision[i]) << '\n';
    }
  }

  json summary;
  json config;
  config["command"] = "layer-select";
  json layer_files = json::object();
  for (const auto& [layer, path] : paths) layer_files[std::to_string(layer)] = path;
  config["layer_files"] = std::move(layer_files);
  config["sets"] = args.sets.string();
  config["k"] = ks;
  json kernel_names = json::array();
  for (auto k : kernels) kernel_names.push_back(to_string(k));
  config["kernels"] = std::move(kernel_names);
  config["photos"] = sets.photos().size();
  config["pairs"] = sets.pair_count();
  config["within_set_pairs"] = sets.within_pair_count();
  summary["config"] = std::move(config);
  summary["best"] = {{"layer", best.layer},
                     {"kernel", to_string(best.kernel)},
                     {"mean_precision", best.mean_precision}};

  write_atomic(args.out, csv.str());
  if (!args.summary.empty()) write_atomic(args.summary, dump(summary));
  std::cout << "best layer=" << best.layer << " kernel=" << to_string(best.kernel)
            << " mean_precision=" << format_double(best.mean_precision) << '\n';
}

void cmd_evaluate(const EvaluateArgs& args) {
  require(!args.out.empty(), "--out is required");
  require(args.k >= 1, "--k must be >= 1");
  const auto model = describe(args.model);
  const auto phase = eval::parse_phase(args.phase);
  require(args.ci == "student" || args.ci == "normal", "--ci expects student|normal");
  const auto ci = args.ci == "student" ? eval::CiMethod::kStudentT : eval::CiMethod::kNormal;

  json extra = split_source_json(args.splits);
  const auto features = load_side(args.side, extra);
  const auto splits = load_splits(args.splits);
  const auto report = eval::evaluate_splits(model, splits, features, phase, args.k, ci);
  const auto doc = eval::to_json(report, extra);

  write_atomic(args.out, dump(doc));
  std::cout << doc["mean"].dump() << '\n';
}

void cmd_tune(const TuneArgs& args) {
  require(!args.out.empty(), "--out is required");
  eval::TuneGrid grid;
  grid.thetas = parse_list<double>(args.thetas, "theta");
  grid.side_kernels = parse_kernel_list(args.side_kernels);
  grid.interaction_kernels = parse_kernel_list(args.interaction_kernels);
  const auto objective = eval::parse_metric(args.objective);
  std::size_t k = args.k;
  if (objective == eval::Metric::kPrecisionAtK && args.objective.starts_with("precision@")) {
    k = parse_list<std::size_t>(args.objective.substr(10), "k").front();
  }
  require(k >= 1, "--k must be >= 1");
  eval::ModelOptions options{args.normalize, args.neighbors};

  json config = split_source_json(args.splits);
  const auto features = load_side(args.side, config);
  const auto splits = load_splits(args.splits);
  const auto result = eval::tune(grid, splits, features, objective, k, options);

  config["command"] = "tune";
  config["objective"] = eval::metric_name(objective, k);
  config["k"] = k;
  config["phase"] = "validation";
  config["normalize"] = args.normalize;
  config["neighbor_limit"] = args.neighbors ? json(*args.neighbors) : json(nullptr);
  config["thetas"] = grid.thetas;
  json sk = json::array(), ik = json::array();
  for (auto kk : grid.side_kernels) sk.push_back(to_string(kk));
  for (auto kk : grid.interaction_kernels) ik.push_back(to_string(kk));
  config["side_kernels"] = std::move(sk);
  config["interaction_kernels"] = std::move(ik);

  json cells = json::array();
  for (const auto& c : result.cells) {
    cells.push_back({{"theta", c.config.theta},
                     {"side_kernel", to_string(c.config.side_kernel)},
                     {"interaction_kernel", to_string(c.config.interaction_kernel)},
                     {"splits", c.per_split},
                     {"mean", c.mean}});
  }
  json doc;
  doc["config"] = std::move(config);
  doc["best"] = {{"theta", result.best.theta},
                 {"side_kernel", to_string(result.best.side_kernel)},
                 {"interaction_kernel", to_string(result.best.interaction_kernel)},
                 {"objective", result.best_objective}};
  doc["grid"] = std::move(cells);

  write_atomic(args.out, dump(doc));
  std::cout << doc["best"].dump() << '\n';
}

void cmd_recommend(const RecommendArgs& args) {
  require(!args.out.empty(), "--out is required");
  require(args.k >= 1, "--k must be >= 1");
  const auto model = describe(args.model);
  json config;
  config["command"] = "recommend";
  config["train"] = args.train.string();
  const auto features = load_side(args.side, config);

  const auto train_rows = dataset::load_interactions(args.train);
  const dataset::SplitTriple split = dataset::assemble_split(train_rows, {}, {}, {});
  auto train = std::make_shared<const dataset::InteractionMatrix>(split.train);
  const rec::Recommender recommender(eval::build_spec(model, split, features), train);
  const auto users = args.users.empty() ? train->users().tokens() : args.users;
  const auto lists = recommender.rank_all(users, args.k);

  std::ostringstream tsv;
  rec::write_ranked_lists(lists, train->items(), tsv);
  config["model"] = model.name;
  config["kind"] = args.model.model;
  config["theta"] = model.blend.theta;
  config["side_kernel"] = to_string(model.blend.side_kernel);
  config["interaction_kernel"] = to_string(model.blend.interaction_kernel);
  config["normalize"] = model.options.normalize;
  config["neighbor_limit"] = args.model.neighbors ? json(*args.model.neighbors) : json(nullptr);
  config["seed"] = model.seed;
  config["k"] = args.k;
  config["users"] = users.size();

  write_atomic(args.out, tsv.str());
  write_atomic(manifest_path(args.out), dump(config));
}

}  // namespace aesthrec::cli
