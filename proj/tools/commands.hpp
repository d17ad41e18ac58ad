#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace aesthrec::cli {

// Either a split directory or explicit train/validation/test files.
struct SplitSource {
  std::filesystem::path splits_dir;
  std::filesystem::path train, valid, test;
};

// Side information: a PHFV feature file or a metadata TSV.
struct FeatureSource {
  std::filesystem::path features;
  std::filesystem::path metadata;
};

struct SplitArgs {
  std::filesystem::path interactions;
  std::size_t num_splits = 5;
  double train_frac = 0.8;
  double valid_frac = 0.1;
  std::filesystem::path out;
};

struct ColorArgs {
  std::filesystem::path images;
  std::string space = "hsv";
  std::size_t bins = 32;
  std::filesystem::path out;
};

struct GramArgs {
  std::vector<std::filesystem::path> maps;
  std::optional<int> layer;
  std::filesystem::path out;
};

struct LayerSelectArgs {
  std::vector<std::string> layer_files;  // "<layer>=<path>"
  std::filesystem::path sets;
  std::string ks = "10,15";
  std::string kernels = "cosine,euclidean,pearson";
  std::filesystem::path out;
  std::filesystem::path summary;
};

struct ModelArgs {
  std::string model = "itemnn";
  std::string name;
  double theta = 0.0;
  std::string side_kernel = "cosine";
  std::string interaction_kernel = "cosine";
  bool normalize = false;
  std::optional<std::size_t> neighbors;
  std::uint64_t seed = 0;
};

struct EvaluateArgs {
  SplitSource splits;
  FeatureSource side;
  ModelArgs model;
  std::size_t k = 10;
  std::string phase = "test";
  std::string ci = "student";
  std::filesystem::path out;
};

struct TuneArgs {
  SplitSource splits;
  FeatureSource side;
  std::string thetas = "0,0.01,0.02,0.04,0.08,0.1,0.2,0.4,0.8,1";
  std::string side_kernels = "cosine,euclidean,pearson";
  std::string interaction_kernels = "cosine,euclidean,pearson";
  std::string objective = "precision@10";
  bool normalize = false;
  std::optional<std::size_t> neighbors;
  std::size_t k = 10;
  std::filesystem::path out;
};

struct RecommendArgs {
  std::filesystem::path train;
  FeatureSource side;
  ModelArgs model;
  std::vector<std::string> users;
  std::size_t k = 10;
  std::filesystem::path out;
};

// Each command validates and computes everything in memory before writing
// any output, then writes each file atomically.
void cmd_split(const SplitArgs& args);
void cmd_color(const ColorArgs& args);
void cmd_gram(const GramArgs& args);
void cmd_layer_select(const LayerSelectArgs& args);
void cmd_evaluate(const EvaluateArgs& args);
void cmd_tune(const TuneArgs& args);
void cmd_recommend(const RecommendArgs& args);

}  // namespace aesthrec::cli
