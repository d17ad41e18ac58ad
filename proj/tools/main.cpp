#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "aesthrec/error.hpp"
#include "commands.hpp"

namespace {

using namespace aesthrec::cli;

void add_split_source(CLI::App* cmd, SplitSource& src) {
  cmd->add_option("--splits-dir", src.splits_dir, "Directory written by `split`");
  cmd->add_option("--train", src.train, "Train interactions TSV");
  cmd->add_option("--valid", src.valid, "Validation interactions TSV");
  cmd->add_option("--test", src.test, "Test interactions TSV");
}

void add_side(CLI::App* cmd, FeatureSource& side) {
  cmd->add_option("--features", side.features, "PHFV feature file (side information)");
  cmd->add_option("--metadata", side.metadata, "Photo metadata TSV (side information)");
}

void add_model(CLI::App* cmd, ModelArgs& m) {
  cmd->add_option("--model", m.model, "random|popular|itemnn")->capture_default_str();
  cmd->add_option("--name", m.name, "Model name recorded in the output");
  cmd->add_option("--theta", m.theta, "Side-information weight in [0,1]")->capture_default_str();
  cmd->add_option("--side-kernel", m.side_kernel, "cosine|pearson|euclidean")
      ->capture_default_str();
  cmd->add_option("--interaction-kernel", m.interaction_kernel, "cosine|pearson|euclidean")
      ->capture_default_str();
  cmd->add_flag("--normalize", m.normalize, "Divide scores by the similarity row sum");
  cmd->add_option("--neighbors", m.neighbors, "Keep only the L most similar items per item");
  cmd->add_option("--seed", m.seed, "Seed for the random baseline")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aesthetic-feature photo recommendation toolkit"};
  app.require_subcommand(1);

  SplitArgs split;
  auto* c_split = app.add_subcommand("split", "Sliding-window temporal train/validation/test splits");
  c_split->add_option("--interactions", split.interactions, "Interactions TSV")->required();
  c_split->add_option("--num-splits", split.num_splits)->capture_default_str();
  c_split->add_option("--train-frac", split.train_frac)->capture_default_str();
  c_split->add_option("--valid-frac", split.valid_frac)->capture_default_str();
  c_split->add_option("--out", split.out, "Output directory")->required();

  ColorArgs color;
  auto* c_color = app.add_subcommand("color", "Color-histogram features for a directory of images");
  c_color->add_option("--images", color.images, "Image directory")->required();
  c_color->add_option("--space", color.space, "hsv|rgb")->capture_default_str();
  c_color->add_option("--bins", color.bins, "Bins per channel")->capture_default_str();
  c_color->add_option("--out", color.out, "Output PHFV file")->required();

  GramArgs gram;
  auto* c_gram = app.add_subcommand("gram", "Gram-matrix style vectors from PHFM feature maps");
  c_gram->add_option("maps", gram.maps, "PHFM feature-map files")->required();
  c_gram->add_option("--layer", gram.layer, "Only use maps of this layer");
  c_gram->add_option("--out", gram.out, "Output PHFV file")->required();

  LayerSelectArgs layer;
  auto* c_layer = app.add_subcommand("layer-select", "Layer x kernel pair Precision@k over aesthetic sets");
  c_layer->add_option("--layer-file", layer.layer_files, "<layer>=<PHFV file>, repeatable")->required();
  c_layer->add_option("--sets", layer.sets, "Aesthetic sets JSON")->required();
  c_layer->add_option("--k", layer.ks, "Comma-separated k list")->capture_default_str();
  c_layer->add_option("--kernels", layer.kernels)->capture_default_str();
  c_layer->add_option("--out", layer.out, "Output CSV table")->required();
  c_layer->add_option("--summary", layer.summary, "Output JSON with the best configuration");

  EvaluateArgs evaluate;
  auto* c_eval = app.add_subcommand("evaluate", "Precision@k, R-Precision and AP with 95% CIs");
  add_split_source(c_eval, evaluate.splits);
  add_side(c_eval, evaluate.side);
  add_model(c_eval, evaluate.model);
  c_eval->add_option("--k", evaluate.k)->capture_default_str();
  c_eval->add_option("--phase", evaluate.phase, "validation|test")->capture_default_str();
  c_eval->add_option("--ci", evaluate.ci, "student|normal")->capture_default_str();
  c_eval->add_option("--out", evaluate.out, "Output JSON report")->required();

  TuneArgs tune;
  auto* c_tune = app.add_subcommand("tune", "Grid-tune theta and kernels on validation data");
  add_split_source(c_tune, tune.splits);
  add_side(c_tune, tune.side);
  c_tune->add_option("--thetas", tune.thetas)->capture_default_str();
  c_tune->add_option("--side-kernels", tune.side_kernels)->capture_default_str();
  c_tune->add_option("--interaction-kernels", tune.interaction_kernels)->capture_default_str();
  c_tune->add_option("--objective", tune.objective, "precision@k|r-precision|average-precision")
      ->capture_default_str();
  c_tune->add_flag("--normalize", tune.normalize);
  c_tune->add_option("--neighbors", tune.neighbors);
  c_tune->add_option("--k", tune.k, "Cutoff for precision objectives")->capture_default_str();
  c_tune->add_option("--out", tune.out, "Output JSON")->required();

  RecommendArgs recommend;
  auto* c_rec = app.add_subcommand("recommend", "Write top-k ranked lists as TSV");
  c_rec->add_option("--train", recommend.train, "Train interactions TSV")->required();
  add_side(c_rec, recommend.side);
  add_model(c_rec, recommend.model);
  c_rec->add_option("--user", recommend.users, "Restrict to these users, repeatable");
  c_rec->add_option("--k", recommend.k)->capture_default_str();
  c_rec->add_option("--out", recommend.out, "Output TSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 2;
  }

  try {
    if (c_split->parsed()) cmd_split(split);
    if (c_color->parsed()) cmd_color(color);
    if (c_gram->parsed()) cmd_gram(gram);
    if (c_layer->parsed()) cmd_layer_select(layer);
    if (c_eval->parsed()) cmd_evaluate(evaluate);
    if (c_tune->parsed()) cmd_tune(tune);
    if (c_rec->parsed()) cmd_recommend(recommend);
  } catch (const aesthrec::Error& e) {
    std::cerr << "error: " << aesthrec::to_string(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
