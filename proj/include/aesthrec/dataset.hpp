#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "aesthrec/feature_table.hpp"

namespace aesthrec::dataset {

using UserIndex = std::uint32_t;
using ItemIndex = std::uint32_t;
using Timestamp = std::int64_t;

struct Interaction {
  std::string user_id;
  std::string photo_id;
  Timestamp timestamp = 0;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

// Sort order used everywhere: timestamp, then (user_id, photo_id).
bool chronological_less(const Interaction& a, const Interaction& b);

// Parses `user_id<TAB>photo_id<TAB>timestamp` lines. Blank lines are skipped.
// Duplicate (user, photo) pairs keep the earliest timestamp; the result is in
// chronological order.
std::vector<Interaction> load_interactions(std::istream& in);
std::vector<Interaction> load_interactions(const std::filesystem::path& path);

// Sorts and collapses duplicate pairs, keeping the earliest timestamp.
std::vector<Interaction> normalize_interactions(std::vector<Interaction> raw);

// Bijection between opaque tokens and dense indices [0, size()).
class IndexMap {
 public:
  // Returns the existing index or appends `token`.
  std::uint32_t intern(std::string_view token);
  std::optional<std::uint32_t> find(std::string_view token) const;
  const std::string& token(std::uint32_t index) const { return tokens_.at(index); }
  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  friend bool operator==(const IndexMap& a, const IndexMap& b) {
    return a.tokens_ == b.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct Cell {
  ItemIndex item = 0;
  Timestamp timestamp = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

// Sparse binary user x item matrix. Every stored cell is an implicit 1.
class InteractionMatrix {
 public:
  InteractionMatrix();
  // Uses the given maps; every interaction's tokens must already be interned.
  InteractionMatrix(std::shared_ptr<const IndexMap> users,
                    std::shared_ptr<const IndexMap> items,
                    std::span<const Interaction> interactions);

  std::size_t num_users() const noexcept { return users_->size(); }
  std::size_t num_items() const noexcept { return items_->size(); }
  std::size_t nnz() const noexcept { return nnz_; }
  double density() const noexcept;

  // Cells of user `u` ordered by strictly increasing item index.
  std::span<const Cell> row(UserIndex u) const { return rows_.at(u); }
  // Users who interacted with item `j`, strictly increasing.
  std::span<const UserIndex> column(ItemIndex j) const { return columns_.at(j); }
  bool contains(UserIndex u, ItemIndex j) const;

  const IndexMap& users() const noexcept { return *users_; }
  const IndexMap& items() const noexcept { return *items_; }
  const std::shared_ptr<const IndexMap>& user_map() const noexcept { return users_; }
  const std::shared_ptr<const IndexMap>& item_map() const noexcept { return items_; }

  // All cells as interactions, in chronological order.
  std::vector<Interaction> interactions() const;

 private:
  std::shared_ptr<const IndexMap> users_;
  std::shared_ptr<const IndexMap> items_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::vector<UserIndex>> columns_;
  std::size_t nnz_ = 0;
};

// Dense indices are assigned in first-appearance order over `interactions`.
InteractionMatrix build_matrix(std::span<const Interaction> interactions);

// Writes the matrix back as interaction TSV, chronologically.
void write_interactions(const InteractionMatrix& matrix, std::ostream& out);
void write_interactions(std::span<const Interaction> interactions, std::ostream& out);

struct SplitBoundaries {
  Timestamp t1 = 0;
  Timestamp t2 = 0;
};

// Train/validation/test parts of one timeline window, sharing index maps.
struct SplitTriple {
  InteractionMatrix train;
  InteractionMatrix validation;
  InteractionMatrix test;
  SplitBoundaries boundaries;
  // Half-open range of positions in the chronologically sorted input.
  std::size_t window_begin = 0;
  std::size_t window_end = 0;
};

// Sliding windows with 50% overlap across the sorted timeline; each window
// is cut at its train_frac and train_frac + valid_frac timestamp quantiles.
std::vector<SplitTriple> temporal_split(std::span<const Interaction> interactions,
                                        std::size_t num_splits, double train_frac,
                                        double valid_frac);

// Recombines three parts loaded from disk into a SplitTriple with shared maps.
SplitTriple assemble_split(std::span<const Interaction> train,
                           std::span<const Interaction> validation,
                           std::span<const Interaction> test,
                           SplitBoundaries boundaries);

struct SplitManifestRow {
  std::size_t split = 0;
  SplitBoundaries boundaries;
  std::size_t window_begin = 0;
  std::size_t window_end = 0;
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
};

SplitManifestRow manifest_row(std::size_t split, const SplitTriple& triple);
// `config_lines` are written as `# key=value` comments ahead of the table.
void write_split_manifest(std::span<const SplitManifestRow> rows,
                          std::span<const std::string> config_lines,
                          std::ostream& out);
std::vector<SplitManifestRow> read_split_manifest(std::istream& in);

// Directory layout: manifest.tsv plus split_<s>/{train,validation,test}.tsv.
void write_split_dir(const std::filesystem::path& dir,
                     std::span<const SplitTriple> splits,
                     std::span<const std::string> config_lines);
std::vector<SplitTriple> load_split_dir(const std::filesystem::path& dir);

struct MetadataRecord {
  std::string photo_id;
  std::set<std::string> categories;
  std::set<std::string> keywords;
  bool editors_choice = false;
};

// `photo_id<TAB>categories<TAB>keywords<TAB>0|1`, comma-separated token lists.
std::vector<MetadataRecord> load_metadata(std::istream& in);
std::vector<MetadataRecord> load_metadata(const std::filesystem::path& path);

// Sorted union of categories and keywords over `records`.
std::vector<std::string> metadata_vocabulary(std::span<const MetadataRecord> records);

// Multi-hot over the vocabulary plus a trailing editors-choice dimension.
// Without an explicit vocabulary the union over `records` is used. Tokens
// outside the vocabulary are ignored.
FeatureTable metadata_to_features(std::span<const MetadataRecord> records,
                                  const std::optional<std::vector<std::string>>& vocabulary = std::nullopt);

}  // namespace aesthrec::dataset
