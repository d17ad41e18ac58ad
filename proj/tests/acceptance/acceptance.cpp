// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "aesthrec/color.hpp"
#include "aesthrec/dataset.hpp"
#include "aesthrec/eval.hpp"
#include "aesthrec/feature_io.hpp"
#include "aesthrec/layer_select.hpp"
#include "aesthrec/recommender.hpp"
#include "aesthrec/similarity.hpp"
#include "aesthrec/style.hpp"
#include "support/cli_runner.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace {

namespace fs = std::filesystem;
using namespace aesthrec;
using dataset::Interaction;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Oracle equivalence of item-NN scores.

Outcome oracle_equivalence() {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> dim(2, 30), feat_dim(2, 8);
  std::uniform_real_distribution<double> density(0.05, 0.6);
  std::normal_distribution<float> gauss(0.0f, 1.0f);
  const double thetas[] = {0.0, 0.2, 1.0};

  std::size_t instances = 0, checks = 0;
  double worst = 0.0, worst_abs = 0.0;
  for (; instances < 120; ++instances) {
    const std::size_t m = dim(rng), n = dim(rng), d = feat_dim(rng);
    const auto dense = fixtures::random_dense(rng, m, n, density(rng));
    auto train = fixtures::matrix_from_dense(dense);

    FeatureTable table;
    oracle::ItemNNOracle ref;
    ref.r.assign(m, std::vector<double>(n));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) ref.r[i][j] = dense[i][j];
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<float> v(d);
      for (auto& x : v) x = gauss(rng);
      ref.features.emplace_back(v.begin(), v.end());
      table.insert(fixtures::item_token(j), v);
    }
    auto features = std::make_shared<sim::ItemFeatures>(table, train->items());

    for (double theta : thetas) {
      for (Kernel side : kAllKernels) {
        for (Kernel inter : kAllKernels) {
          ref.theta = theta;
          ref.side = side;
          ref.inter = inter;
          std::vector<std::vector<double>> s(n, std::vector<double>(n, 0.0));
          for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
              if (j != k) s[j][k] = ref.sim(j, k);

          sim::SimilarityModel model({theta, side, inter}, train, features);
          for (bool normalize : {false, true}) {
            rec::Recommender recommender(rec::RecommenderSpec::item_nn(model, normalize), train);
            for (std::size_t i = 0; i < m; ++i) {
              const auto got = recommender.score_all(static_cast<dataset::UserIndex>(i));
              for (std::size_t j = 0; j < n; ++j) {
                double num = 0, den = 0, magnitude = 0;
                for (std::size_t k = 0; k < n; ++k) {
                  if (k == j) continue;
                  num += s[j][k] * ref.r[i][k];
                  den += s[j][k];
                  magnitude += std::abs(s[j][k]);
                }
                const bool zero_den = std::abs(den) <= 1e-12 * magnitude;
                const double want = normalize ? (zero_den ? 0.0 : num / den) : num;
                // Absolute below 1, relative above: normalized scores grow
                // without bound as the row sum approaches zero.
                worst = std::max(worst, std::abs(got[j] - want) / std::max(1.0, std::abs(want)));
                worst_abs = std::max(worst_abs, std::abs(got[j] - want));
                ++checks;
              }
            }
          }
        }
      }
    }
  }
  return {worst <= 1e-9, std::to_string(instances) + " instances, " + std::to_string(checks) +
                             " scores, max |diff|/max(1,|score|) " + fmt(worst) +
                             ", max |diff| " + fmt(worst_abs)};
}

// ---------------------------------------------------------------------------
// Ranking metrics against exact rational arithmetic.

bool correctly_rounded(double v, const oracle::Rational& exact) {
  using oracle::Rational;
  const Rational r(v);
  const Rational err = abs(r - exact);
  return err <= abs(Rational(std::nextafter(v, HUGE_VAL)) - exact) &&
         err <= abs(Rational(std::nextafter(v, -HUGE_VAL)) - exact);
}

Outcome metric_oracle() {
  std::mt19937_64 rng(2002);
  std::size_t inexact = 0;
  double worst_ap = 0.0;
  const std::size_t lists = 1000;
  for (std::size_t t = 0; t < lists; ++t) {
    const std::size_t universe = std::uniform_int_distribution<std::size_t>(1, 200)(rng);
    std::vector<dataset::ItemIndex> items(universe);
    std::iota(items.begin(), items.end(), 0u);
    std::shuffle(items.begin(), items.end(), rng);
    const std::size_t len = std::uniform_int_distribution<std::size_t>(0, universe)(rng);
    std::vector<dataset::ItemIndex> ranked(items.begin(), items.begin() + len);

    std::shuffle(items.begin(), items.end(), rng);
    const std::size_t rel_size =
        std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(universe, 30))(rng);
    std::vector<dataset::ItemIndex> rel(items.begin(), items.begin() + rel_size);
    const eval::RelevantSet relevant(rel);
    const std::set<std::uint32_t> rel_set(rel.begin(), rel.end());

    if (!correctly_rounded(eval::precision_at_k(ranked, relevant, 10),
                           oracle::precision_at_k(ranked, rel_set, 10)))
      ++inexact;
    if (!correctly_rounded(eval::r_precision(ranked, relevant), oracle::r_precision(ranked, rel_set)))
      ++inexact;
    const oracle::Rational ap = oracle::average_precision(ranked, rel_set);
    const double diff = abs(oracle::Rational(eval::average_precision(ranked, relevant)) - ap)
                            .convert_to<double>();
    worst_ap = std::max(worst_ap, diff);
  }
  return {inexact == 0 && worst_ap <= 1e-12,
          std::to_string(lists) + " lists, " + std::to_string(inexact) +
              " P@10/R-P values not exactly rounded, max AP |diff| " + fmt(worst_ap)};
}

// ---------------------------------------------------------------------------
// Color conversion and histogram invariants.

color::Hsv hexcone(int r, int g, int b) {
  const int mx = std::max({r, g, b}), mn = std::min({r, g, b});
  const double delta = mx - mn;
  color::Hsv out;
  out.v = mx / 255.0;
  out.s = mx == 0 ? 0.0 : delta / mx;
  if (delta == 0) return out;
  double h;
  if (mx == r) h = 60.0 * std::fmod((g - b) / delta + 6.0, 6.0);
  else if (mx == g) h = 60.0 * ((b - r) / delta + 2.0);
  else h = 60.0 * ((r - g) / delta + 4.0);
  out.h = h >= 360.0 ? h - 360.0 : h;
  return out;
}

Outcome color_correctness() {
  double worst_sv = 0, worst_h = 0;
  for (int r = 0; r < 256; r += 17)
    for (int g = 0; g < 256; g += 17)
      for (int b = 0; b < 256; b += 17) {
        const auto got = color::rgb_to_hsv(static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                           static_cast<std::uint8_t>(b));
        const auto want = hexcone(r, g, b);
        worst_sv = std::max({worst_sv, std::abs(got.s - want.s), std::abs(got.v - want.v)});
        double dh = std::abs(got.h - want.h);
        worst_h = std::max(worst_h, std::min(dh, 360.0 - dh));
      }

  std::mt19937_64 rng(3003);
  std::uniform_int_distribution<int> byte(0, 255), side(1, 40), bins(1, 64);
  std::size_t violations = 0;
  const std::size_t fixtures_count = 50;
  for (std::size_t t = 0; t < fixtures_count; ++t) {
    const auto space = t % 2 == 0 ? color::ColorSpace::kHsv : color::ColorSpace::kRgb;
    const std::size_t nb = bins(rng);
    color::RgbImage img(side(rng), side(rng));
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(byte(rng));
    const auto hist = color::extract_histogram(img, space, nb);

    // L1 normalization per channel block.
    for (std::size_t c = 0; c < 3; ++c) {
      double sum = 0;
      for (std::size_t i = 0; i < nb; ++i) {
        const double v = hist.values[c * nb + i];
        if (v < 0) ++violations;
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-12) ++violations;
    }

    // Pixel permutation leaves the histogram unchanged.
    std::vector<std::size_t> order(img.pixel_count());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    color::RgbImage shuffled(img.width, img.height);
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t c = 0; c < 3; ++c) shuffled.pixels[3 * i + c] = img.pixels[3 * order[i] + c];
    if (color::extract_histogram(shuffled, space, nb).values != hist.values) ++violations;

    // A solid image puts all mass of each block in one bin.
    const int sr = byte(rng), sg = byte(rng), sb = byte(rng);
    const auto solid = color::extract_histogram(
        color::RgbImage::solid(side(rng), side(rng), static_cast<std::uint8_t>(sr),
                               static_cast<std::uint8_t>(sg), static_cast<std::uint8_t>(sb)),
        space, nb);
    const int channel_values[] = {sr, sg, sb};
    for (std::size_t c = 0; c < 3; ++c) {
      std::size_t nonzero = 0, at = 0;
      for (std::size_t i = 0; i < nb; ++i) {
        if (solid.values[c * nb + i] != 0.0) {
          ++nonzero;
          at = i;
        }
      }
      if (nonzero != 1 || solid.values[c * nb + at] != 1.0) ++violations;
      if (space == color::ColorSpace::kRgb &&
          at != static_cast<std::size_t>(channel_values[c]) * nb / 256)
        ++violations;
    }
  }
  const bool pass = worst_sv <= 1e-9 && worst_h <= 1e-6 && violations == 0;
  return {pass, "4096 colors, max S/V diff " + fmt(worst_sv) + ", max H diff " + fmt(worst_h) +
                    " deg, " + std::to_string(fixtures_count) + " histogram fixtures, " +
                    std::to_string(violations) + " invariant violations"};
}

// ---------------------------------------------------------------------------
// Gram matrix properties.

style::FeatureMap random_map(std::mt19937_64& rng, std::uint32_t c, std::uint32_t m) {
  style::FeatureMap map{"x", 1, c, m, std::vector<float>(std::size_t(c) * m)};
  std::normal_distribution<float> gauss(0.0f, 1.0f);
  const bool relu = rng() % 2 == 0;
  const float scale = std::pow(10.0f, static_cast<float>(static_cast<int>(rng() % 7) - 3));
  for (auto& v : map.data) {
    const float x = gauss(rng) * scale;
    v = relu ? std::max(x, 0.0f) : x;
  }
  return map;
}

style::FeatureMap permute_positions(const style::FeatureMap& map, const std::vector<std::size_t>& perm) {
  auto out = map;
  for (std::size_t c = 0; c < map.channels; ++c)
    for (std::size_t p = 0; p < map.positions; ++p)
      out.data[c * map.positions + p] = map.at(c, perm[p]);
  return out;
}

style::FeatureMap tile_positions(const style::FeatureMap& map, std::uint32_t times) {
  style::FeatureMap out{map.photo_id, map.layer_index, map.channels, map.positions * times, {}};
  out.data.reserve(out.channels * std::size_t(out.positions));
  for (std::size_t c = 0; c < map.channels; ++c)
    for (std::uint32_t t = 0; t < times; ++t)
      for (std::size_t p = 0; p < map.positions; ++p) out.data.push_back(map.at(c, p));
  return out;
}

Outcome gram_correctness() {
  std::mt19937_64 rng(4004);
  std::uniform_int_distribution<std::uint32_t> channels(1, 64), positions(1, 1024), tiles(2, 4);
  double worst_asym = 0, worst_psd = 0, worst_tile = 0;
  std::size_t perm_mismatch = 0;
  const std::size_t maps = 100;
  for (std::size_t t = 0; t < maps; ++t) {
    // Every tenth map is at the full size.
    const std::uint32_t c = t % 10 == 0 ? 64 : channels(rng);
    const std::uint32_t m = t % 10 == 0 ? 1024 : positions(rng);
    const auto map = random_map(rng, c, m);
    const auto g = style::gram(map);

    double max_abs = 0, trace = 0;
    Eigen::MatrixXd dense(c, c);
    for (std::size_t a = 0; a < c; ++a) {
      trace += g.values[a * c + a];
      for (std::size_t b = 0; b < c; ++b) {
        const double x = g.values[a * c + b], y = g.values[b * c + a];
        dense(a, b) = x;
        max_abs = std::max(max_abs, std::abs(x));
        const double scale = std::max(std::abs(x), std::abs(y));
        if (scale > 0) worst_asym = std::max(worst_asym, std::abs(x - y) / scale);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense, Eigen::EigenvaluesOnly);
    const double floor = eig.eigenvalues().minCoeff();
    if (trace > 0) worst_psd = std::min(worst_psd, floor / trace);
    else if (floor < 0) worst_psd = -1;

    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    if (style::gram(permute_positions(map, perm)).values != g.values) ++perm_mismatch;

    const std::uint32_t times = tiles(rng);
    const auto base = style::gram(map);
    const auto tiled = style::gram(tile_positions(map, times));
    for (std::size_t i = 0; i < base.values.size(); ++i) {
      if (max_abs > 0)
        worst_tile = std::max(worst_tile, std::abs(tiled.values[i] - base.values[i]) / max_abs);
      else if (tiled.values[i] != 0)
        worst_tile = 1;
    }
  }
  const bool pass = worst_asym <= 1e-5 && worst_psd >= -1e-4 && perm_mismatch == 0 && worst_tile <= 1e-6;
  return {pass, std::to_string(maps) + " maps, max rel asymmetry " + fmt(worst_asym) +
                    ", min eigenvalue/trace " + fmt(worst_psd) + ", " + std::to_string(perm_mismatch) +
                    " permutation mismatches, max rel tiling diff " + fmt(worst_tile)};
}

// ---------------------------------------------------------------------------
// Synthetic end-to-end separation.

struct Synthetic {
  std::vector<Interaction> likes;
  std::shared_ptr<FeatureTable> features;
};

// Users and items each belong to one of ten clusters. Users like items of
// their own cluster far more often, and item features are the cluster
// centroid plus noise.
Synthetic make_synthetic(std::uint64_t seed) {
  constexpr std::size_t kUsers = 200, kItems = 500, kClusters = 10, kDim = 10;
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> noise(0.0f, 1.0f);
  std::bernoulli_distribution like_in(0.3), like_out(0.01);
  std::uniform_int_distribution<dataset::Timestamp> when(0, 1'000'000);

  Synthetic s;
  s.features = std::make_shared<FeatureTable>();
  for (std::size_t j = 0; j < kItems; ++j) {
    std::vector<float> v(kDim);
    for (std::size_t d = 0; d < kDim; ++d) v[d] = (d == j % kClusters ? 3.0f : 0.0f) + noise(rng);
    s.features->insert(fixtures::item_token(j), std::move(v));
  }
  for (std::size_t u = 0; u < kUsers; ++u)
    for (std::size_t j = 0; j < kItems; ++j)
      if (u % kClusters == j % kClusters ? like_in(rng) : like_out(rng))
        s.likes.push_back({fixtures::user_token(u), fixtures::item_token(j), when(rng)});
  s.likes = dataset::normalize_interactions(std::move(s.likes));
  return s;
}

std::vector<dataset::SplitTriple> subsample_train(const std::vector<dataset::SplitTriple>& splits,
                                                  double keep, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<dataset::SplitTriple> out;
  for (const auto& s : splits) {
    auto train = s.train.interactions();
    std::shuffle(train.begin(), train.end(), rng);
    train.resize(static_cast<std::size_t>(std::llround(keep * static_cast<double>(train.size()))));
    train = dataset::normalize_interactions(std::move(train));
    out.push_back(dataset::assemble_split(train, s.validation.interactions(), s.test.interactions(),
                                          s.boundaries));
  }
  return out;
}

eval::PhaseMetrics test_mean(const eval::ModelDescription& model,
                             const std::vector<dataset::SplitTriple>& splits,
                             const eval::FeatureProvider& features) {
  return eval::evaluate_splits(model, splits, features, eval::Phase::kTest, 10).mean;
}

eval::ModelDescription itemnn(const sim::BlendConfig& blend) {
  eval::ModelDescription m;
  m.name = "itemnn";
  m.kind = rec::RecommenderKind::kItemNN;
  m.blend = blend;
  return m;
}

bool beats_all(const eval::PhaseMetrics& a, const eval::PhaseMetrics& b) {
  return a.precision_at_k > b.precision_at_k && a.r_precision > b.r_precision &&
         a.average_precision > b.average_precision;
}

std::string triple(const eval::PhaseMetrics& m) {
  return "P@10=" + fmt(m.precision_at_k) + " RP=" + fmt(m.r_precision) + " AP=" + fmt(m.average_precision);
}

Outcome synthetic_separation() {
  const auto data = make_synthetic(5005);
  const auto splits = dataset::temporal_split(data.likes, 3, 0.7, 0.15);
  const auto features = eval::table_features(data.features);

  auto grid = eval::TuneGrid::defaults();
  eval::TuneGrid blend_grid = grid;
  blend_grid.thetas.erase(std::remove(blend_grid.thetas.begin(), blend_grid.thetas.end(), 0.0),
                          blend_grid.thetas.end());
  eval::TuneGrid zero_grid = grid;
  zero_grid.thetas = {0.0};

  const auto tuned = eval::tune(blend_grid, splits, features, eval::Metric::kPrecisionAtK, 10);
  const auto side = test_mean(itemnn(tuned.best), splits, features);
  eval::ModelDescription popular;
  eval::ModelDescription random;
  random.name = "random";
  random.kind = rec::RecommenderKind::kRandom;
  random.seed = 17;
  const auto pop = test_mean(popular, splits, features);
  const auto rnd = test_mean(random, splits, features);

  const auto sparse = subsample_train(splits, 0.2, 6006);
  const auto sparse_blend = eval::tune(blend_grid, sparse, features, eval::Metric::kPrecisionAtK, 10);
  const auto sparse_zero = eval::tune(zero_grid, sparse, features, eval::Metric::kPrecisionAtK, 10);
  const auto blend_m = test_mean(itemnn(sparse_blend.best), sparse, features);
  const auto zero_m = test_mean(itemnn(sparse_zero.best), sparse, features);

  // Same seed, same result.
  const auto again = test_mean(itemnn(eval::tune(blend_grid, splits, features,
                                                 eval::Metric::kPrecisionAtK, 10).best),
                               splits, features);
  const bool deterministic = again.precision_at_k == side.precision_at_k &&
                             again.r_precision == side.r_precision &&
                             again.average_precision == side.average_precision;

  const bool pass = tuned.best.theta > 0 && beats_all(side, pop) && beats_all(side, rnd) &&
                    sparse_blend.best.theta > 0 && beats_all(blend_m, zero_m) && deterministic;
  std::ostringstream detail;
  detail << "tuned theta=" << tuned.best.theta << " side=" << to_string(tuned.best.side_kernel)
         << " interaction=" << to_string(tuned.best.interaction_kernel) << " [" << triple(side)
         << "] vs popular [" << triple(pop) << "] vs random [" << triple(rnd) << "]; 20% train: theta="
         << sparse_blend.best.theta << " [" << triple(blend_m) << "] vs theta=0 [" << triple(zero_m)
         << "]" << (deterministic ? "" : "; NOT deterministic");
  return {pass, detail.str()};
}

// ---------------------------------------------------------------------------
// CLI-driven checks.

struct Workspace {
  fixtures::TempDir dir{"acceptance"};
  fs::path scratch() const { return dir.path(); }
};

cli_runner::Result cli(const Workspace& ws, const std::vector<std::string>& args) {
  return cli_runner::run(args, ws.scratch());
}

std::vector<double> csv_precisions(const std::string& csv) {
  std::vector<double> out;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) out.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  return out;
}

Outcome layer_harness() {
  Workspace ws;
  const fs::path data = fs::path(AESTHREC_TEST_DATA) / "layers";
  std::vector<std::string> base = {"layer-select", "--sets", (data / "sets.json").string()};
  for (int layer = 1; layer <= 16; ++layer) {
    const auto out = ws.dir / ("layer" + std::to_string(layer) + ".phfv");
    const auto r = cli(ws, {"gram", (data / ("layer" + std::to_string(layer) + ".phfm")).string(),
                            "--out", out.string()});
    if (r.exit_code != 0) return {false, "gram failed on layer " + std::to_string(layer) + ": " + r.err};
    base.push_back("--layer-file");
    base.push_back(std::to_string(layer) + "=" + out.string());
  }

  auto args = base;
  args.insert(args.end(), {"--out", (ws.dir / "table.csv").string(), "--summary",
                           (ws.dir / "best.json").string()});
  auto r = cli(ws, args);
  if (r.exit_code != 0) return {false, "layer-select failed: " + r.err};
  const auto best = nlohmann::json::parse(fixtures::read_file(ws.dir / "best.json"))["best"];
  const bool recovered = best["layer"] == 8 && best["kernel"] == "euclidean" &&
                         r.out.rfind("best layer=8 kernel=euclidean", 0) == 0;

  const auto sets = style::load_aesthetic_sets(data / "sets.json");
  const std::size_t all_pairs = sets.pair_count();
  const double expected = static_cast<double>(sets.within_pair_count()) / static_cast<double>(all_pairs);
  args = base;
  args.insert(args.end(), {"--k", std::to_string(all_pairs), "--out", (ws.dir / "all.csv").string()});
  r = cli(ws, args);
  if (r.exit_code != 0) return {false, "layer-select (all pairs) failed: " + r.err};
  const auto values = csv_precisions(fixtures::read_file(ws.dir / "all.csv"));
  const bool combinatorial =
      values.size() == 48 && std::all_of(values.begin(), values.end(), [&](double v) { return v == expected; });

  std::ostringstream detail;
  detail << "best layer=" << best["layer"] << " kernel=" << best["kernel"].get<std::string>() << "; k="
         << all_pairs << " gives " << sets.within_pair_count() << "/" << all_pairs << " on "
         << values.size() << " rows" << (combinatorial ? "" : " (MISMATCH)");
  return {recovered && combinatorial, detail.str()};
}

void write_ppm(const fs::path& path, const color::RgbImage& img) {
  std::string bytes = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  bytes.append(img.pixels.begin(), img.pixels.end());
  fixtures::write_file(path, bytes);
}

// Every regular file under `path` (or `path` itself) plus an optional sidecar.
std::map<std::string, std::string> snapshot(const fs::path& path) {
  std::map<std::string, std::string> out;
  if (fs::is_directory(path)) {
    for (const auto& e : fs::recursive_directory_iterator(path))
      if (e.is_regular_file()) out[fs::relative(e.path(), path).string()] = fixtures::read_file(e.path());
  } else if (fs::exists(path)) {
    out[""] = fixtures::read_file(path);
  }
  fs::path sidecar = path;
  sidecar += ".manifest.json";
  if (fs::exists(sidecar)) out[".manifest.json"] = fixtures::read_file(sidecar);
  return out;
}

Outcome reproducibility() {
  Workspace ws;
  std::mt19937_64 rng(7007);
  const auto likes = fixtures::random_interactions(rng, 40, 30, 400, 100000);
  {
    std::ofstream out(ws.dir / "likes.tsv");
    dataset::write_interactions(likes, out);
  }
  fs::create_directories(ws.dir / "images");
  std::uniform_int_distribution<int> byte(0, 255);
  for (std::size_t j = 0; j < 30; ++j) {
    color::RgbImage img(12, 9);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(byte(rng));
    write_ppm(ws.dir / "images" / (fixtures::item_token(j) + ".ppm"), img);
  }
  const fs::path layers = fs::path(AESTHREC_TEST_DATA) / "layers";
  const std::string d = ws.dir.path().string();

  struct Step {
    std::string name;
    std::vector<std::string> args;
    fs::path output;
  };
  const std::vector<Step> steps = {
      {"split", {"split", "--interactions", d + "/likes.tsv", "--num-splits", "3", "--out", d + "/splits"},
       d + "/splits"},
      {"color", {"color", "--images", d + "/images", "--space", "hsv", "--bins", "8", "--out", d + "/color.phfv"},
       d + "/color.phfv"},
      {"gram", {"gram", (layers / "layer3.phfm").string(), "--out", d + "/style.phfv"}, d + "/style.phfv"},
      {"layer-select",
       {"layer-select", "--layer-file", "3=" + d + "/style.phfv", "--sets", (layers / "sets.json").string(),
        "--out", d + "/layers.csv", "--summary", d + "/layers.json"},
       d + "/layers.csv"},
      {"evaluate",
       {"evaluate", "--splits-dir", d + "/splits", "--features", d + "/color.phfv", "--model", "itemnn",
        "--theta", "0.3", "--side-kernel", "euclidean", "--out", d + "/eval.json"},
       d + "/eval.json"},
      {"evaluate-random",
       {"evaluate", "--splits-dir", d + "/splits", "--model", "random", "--seed", "9", "--out",
        d + "/random.json"},
       d + "/random.json"},
      {"tune",
       {"tune", "--splits-dir", d + "/splits", "--features", d + "/color.phfv", "--thetas", "0,0.5",
        "--side-kernels", "cosine,pearson", "--interaction-kernels", "cosine", "--out", d + "/tune.json"},
       d + "/tune.json"},
      {"recommend",
       {"recommend", "--train", d + "/splits/split_0/train.tsv", "--features", d + "/color.phfv", "--model",
        "itemnn", "--theta", "0.5", "--normalize", "--k", "5", "--out", d + "/rec.tsv"},
       d + "/rec.tsv"},
  };

  std::vector<std::string> differing;
  for (const auto& step : steps) {
    auto r = cli(ws, step.args);
    if (r.exit_code != 0) return {false, step.name + " failed: " + r.err};
    const auto first = snapshot(step.output);
    const auto first_out = r.out;
    r = cli(ws, step.args);
    if (r.exit_code != 0) return {false, step.name + " rerun failed: " + r.err};
    if (first.empty() || snapshot(step.output) != first || r.out != first_out) differing.push_back(step.name);
  }
  std::string detail = std::to_string(steps.size()) + " commands rerun";
  for (const auto& name : differing) detail += ", differs: " + name;
  return {differing.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle-equivalence", oracle_equivalence},
      {"metric-oracle", metric_oracle},
      {"color-correctness", color_correctness},
      {"gram-correctness", gram_correctness},
      {"synthetic-separation", synthetic_separation},
      {"layer-select-harness", layer_harness},
      {"reproducibility", reproducibility},
  };
  // Runtime budgets in seconds.
  const std::map<std::string, double> budget = {
      {"oracle-equivalence", 10}, {"gram-correctness", 30}, {"synthetic-separation", 120}};

  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (auto it = budget.find(name); it != budget.end() && secs >= it->second) {
      outcome.pass = false;
      outcome.detail += "; over the " + fmt(it->second) + " s budget";
    }
    std::cout << (outcome.pass ? "PASS " : "FAIL ") << name << ": " << outcome.detail << " (" << fmt(secs)
              << " s)" << std::endl;
    if (!outcome.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
