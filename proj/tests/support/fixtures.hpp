#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "aesthrec/dataset.hpp"

namespace fixtures {

namespace fs = std::filesystem;

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("aesthrec_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string user_token(std::size_t i) { return "u" + std::to_string(i); }
inline std::string item_token(std::size_t j) { return "p" + std::to_string(j); }

// `count` distinct (user, item) pairs with random timestamps in [0, max_ts].
inline std::vector<aesthrec::dataset::Interaction> random_interactions(
    std::mt19937_64& rng, std::size_t users, std::size_t items, std::size_t count,
    std::int64_t max_ts) {
  std::uniform_int_distribution<std::size_t> pick_user(0, users - 1), pick_item(0, items - 1);
  std::uniform_int_distribution<std::int64_t> pick_ts(0, max_ts);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<aesthrec::dataset::Interaction> out;
  while (out.size() < count) {
    auto key = std::make_pair(pick_user(rng), pick_item(rng));
    if (!seen.insert(key).second) continue;
    out.push_back({user_token(key.first), item_token(key.second), pick_ts(rng)});
  }
  return out;
}

// Matrix whose row i / column j are tokens u<i> / p<j>, including users and
// items with no interactions.
inline std::shared_ptr<aesthrec::dataset::InteractionMatrix> matrix_from_dense(
    const std::vector<std::vector<int>>& r) {
  using namespace aesthrec::dataset;
  auto users = std::make_shared<IndexMap>();
  auto items = std::make_shared<IndexMap>();
  for (std::size_t i = 0; i < r.size(); ++i) users->intern(user_token(i));
  const std::size_t n = r.empty() ? 0 : r[0].size();
  for (std::size_t j = 0; j < n; ++j) items->intern(item_token(j));
  std::vector<Interaction> list;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (r[i][j]) list.push_back({user_token(i), item_token(j), static_cast<Timestamp>(i * n + j)});
  return std::make_shared<InteractionMatrix>(users, items, list);
}

inline std::vector<std::vector<int>> random_dense(std::mt19937_64& rng, std::size_t m,
                                                  std::size_t n, double density) {
  std::bernoulli_distribution coin(density);
  std::vector<std::vector<int>> r(m, std::vector<int>(n, 0));
  for (auto& row : r)
    for (auto& v : row) v = coin(rng) ? 1 : 0;
  return r;
}

}  // namespace fixtures
