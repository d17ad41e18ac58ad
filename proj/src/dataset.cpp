#include "aesthrec/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "aesthrec/error.hpp"
#include "text_util.hpp"

namespace aesthrec::dataset {

bool chronological_less(const Interaction& a, const Interaction& b) {
  return std::tie(a.timestamp, a.user_id, a.photo_id) <
         std::tie(b.timestamp, b.user_id, b.photo_id);
}

std::vector<Interaction> normalize_interactions(std::vector<Interaction> raw) {
  // Earliest timestamp first within each pair, then drop later duplicates.
  std::sort(raw.begin(), raw.end(), [](const Interaction& a, const Interaction& b) {
    return std::tie(a.user_id, a.photo_id, a.timestamp) <
           std::tie(b.user_id, b.photo_id, b.timestamp);
  });
  auto last = std::unique(raw.begin(), raw.end(),
                          [](const Interaction& a, const Interaction& b) {
                            return a.user_id == b.user_id && a.photo_id == b.photo_id;
                          });
  raw.erase(last, raw.end());
  std::sort(raw.begin(), raw.end(), chronological_less);
  return raw;
}

std::vector<Interaction> load_interactions(std::istream& in) {
  std::vector<Interaction> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (line.empty()) continue;
    const auto fields = detail::split(line, '\t');
    if (fields.size() != 3) {
      throw ParseError(line_no, "expected 3 tab-separated fields, got " +
                                    std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw ParseError(line_no, "empty user or photo id");
    }
    Timestamp ts = 0;
    const auto text = fields[2];
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), ts);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw ParseError(line_no, "bad timestamp '" + std::string(text) + "'");
    }
    if (ts < 0) {
      throw Error(ErrorCode::kValidation, "line " + std::to_string(line_no) +
                                              ": negative timestamp " +
                                              std::to_string(ts));
    }
    raw.push_back({std::string(fields[0]), std::string(fields[1]), ts});
  }
  return normalize_interactions(std::move(raw));
}

std::vector<Interaction> load_interactions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return load_interactions(in);
}

std::uint32_t IndexMap::intern(std::string_view token) {
  auto [it, inserted] =
      index_.try_emplace(std::string(token), static_cast<std::uint32_t>(tokens_.size()));
  if (inserted) tokens_.emplace_back(token);
  return it->second;
}

std::optional<std::uint32_t> IndexMap::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

InteractionMatrix::InteractionMatrix()
    : users_(std::make_shared<IndexMap>()), items_(std::make_shared<IndexMap>()) {}

InteractionMatrix::InteractionMatrix(std::shared_ptr<const IndexMap> users,
                                     std::shared_ptr<const IndexMap> items,
                                     std::span<const Interaction> interactions)
    : users_(std::move(users)),
      items_(std::move(items)),
      rows_(users_->size()),
      columns_(items_->size()) {
  for (const auto& x : interactions) {
    auto u = users_->find(x.user_id);
    auto j = items_->find(x.photo_id);
    if (!u || !j) {
      throw Error(ErrorCode::kValidation,
                  "interaction (" + x.user_id + ", " + x.photo_id +
                      ") is not covered by the index maps");
    }
    rows_[*u].push_back({*j, x.timestamp});
  }
  for (UserIndex u = 0; u < rows_.size(); ++u) {
    auto& row = rows_[u];
    std::sort(row.begin(), row.end(),
              [](const Cell& a, const Cell& b) { return a.item < b.item; });
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (row[c].item == row[c - 1].item) {
        throw Error(ErrorCode::kValidation,
                    "duplicate cell (" + users_->token(u) + ", " +
                        items_->token(row[c].item) + ")");
      }
    }
    for (const auto& cell : row) columns_[cell.item].push_back(u);
    nnz_ += row.size();
  }
}

double InteractionMatrix::density() const noexcept {
  const double cells = static_cast<double>(num_users()) * static_cast<double>(num_items());
  return cells == 0.0 ? 0.0 : static_cast<double>(nnz_) / cells;
}

bool InteractionMatrix::contains(UserIndex u, ItemIndex j) const {
  const auto r = row(u);
  auto it = std::lower_bound(r.begin(), r.end(), j,
                             [](const Cell& c, ItemIndex item) { return c.item < item; });
  return it != r.end() && it->item == j;
}

std::vector<Interaction> InteractionMatrix::interactions() const {
  std::vector<Interaction> out;
  out.reserve(nnz_);
  for (UserIndex u = 0; u < rows_.size(); ++u) {
    for (const auto& cell : rows_[u]) {
      out.push_back({users_->token(u), items_->token(cell.item), cell.timestamp});
    }
  }
  std::sort(out.begin(), out.end(), chronological_less);
  return out;
}

InteractionMatrix build_matrix(std::span<const Interaction> interactions) {
  auto users = std::make_shared<IndexMap>();
  auto items = std::make_shared<IndexMap>();
  for (const auto& x : interactions) {
    users->intern(x.user_id);
    items->intern(x.photo_id);
  }
  return InteractionMatrix(std::move(users), std::move(items), interactions);
}

void write_interactions(std::span<const Interaction> interactions, std::ostream& out) {
  for (const auto& x : interactions) {
    out << x.user_id << '\t' << x.photo_id << '\t' << x.timestamp << '\n';
  }
}

void write_interactions(const InteractionMatrix& matrix, std::ostream& out) {
  write_interactions(matrix.interactions(), out);
}

namespace {

std::size_t quantile_offset(double frac, std::size_t window) {
  // The epsilon keeps exact products like 0.6 * 10 from flooring to 5.
  return static_cast<std::size_t>(std::floor(frac * static_cast<double>(window) + 1e-9));
}

}  // namespace

SplitTriple assemble_split(std::span<const Interaction> train,
                           std::span<const Interaction> validation,
                           std::span<const Interaction> test,
                           SplitBoundaries boundaries) {
  std::vector<Interaction> all;
  all.reserve(train.size() + validation.size() + test.size());
  all.insert(all.end(), train.begin(), train.end());
  all.insert(all.end(), validation.begin(), validation.end());
  all.insert(all.end(), test.begin(), test.end());
  std::sort(all.begin(), all.end(), chronological_less);

  auto users = std::make_shared<IndexMap>();
  auto items = std::make_shared<IndexMap>();
  for (const auto& x : all) {
    users->intern(x.user_id);
    items->intern(x.photo_id);
  }
  SplitTriple triple{
      InteractionMatrix(users, items, train),
      InteractionMatrix(users, items, validation),
      InteractionMatrix(users, items, test),
      boundaries,
      0,
      all.size(),
  };
  return triple;
}

std::vector<SplitTriple> temporal_split(std::span<const Interaction> interactions,
                                        std::size_t num_splits, double train_frac,
                                        double valid_frac) {
  if (num_splits < 1) {
    throw Error(ErrorCode::kInvalidArgument, "num_splits must be >= 1");
  }
  if (!(train_frac > 0.0) || !(valid_frac > 0.0) || !(train_frac + valid_frac < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "fractions must satisfy 0 < train, valid and train + valid < 1");
  }
  if (!std::is_sorted(interactions.begin(), interactions.end(), chronological_less)) {
    throw Error(ErrorCode::kInvalidArgument, "interactions must be sorted chronologically");
  }
  const std::size_t n = interactions.size();
  if (n < 3 * num_splits) {
    throw Error(ErrorCode::kInsufficientData,
                std::to_string(n) + " interactions cannot fill " +
                    std::to_string(num_splits) + " splits");
  }

  std::vector<SplitTriple> splits;
  splits.reserve(num_splits);
  for (std::size_t s = 0; s < num_splits; ++s) {
    // Window s covers halves s and s+1 of num_splits + 1 equal halves.
    const std::size_t begin = s * n / (num_splits + 1);
    const std::size_t end = (s + 2) * n / (num_splits + 1);
    const std::size_t width = end - begin;
    const auto window = interactions.subspan(begin, width);

    SplitBoundaries b;
    b.t1 = window[quantile_offset(train_frac, width)].timestamp;
    b.t2 = window[quantile_offset(train_frac + valid_frac, width)].timestamp;
    if (b.t1 <= window.front().timestamp || b.t1 >= b.t2) {
      throw Error(ErrorCode::kInsufficientData,
                  "split " + std::to_string(s) +
                      ": degenerate timeline, quantile boundaries coincide");
    }

    std::vector<Interaction> train, validation, test;
    for (const auto& x : window) {
      if (x.timestamp < b.t1) {
        train.push_back(x);
      } else if (x.timestamp < b.t2) {
        validation.push_back(x);
      } else {
        test.push_back(x);
      }
    }
    auto triple = assemble_split(train, validation, test, b);
    triple.window_begin = begin;
    triple.window_end = end;
    splits.push_back(std::move(triple));
  }
  return splits;
}

SplitManifestRow manifest_row(std::size_t split, const SplitTriple& triple) {
  return {split,
          triple.boundaries,
          triple.window_begin,
          triple.window_end,
          triple.train.nnz(),
          triple.validation.nnz(),
          triple.test.nnz()};
}

void write_split_manifest(std::span<const SplitManifestRow> rows,
                          std::span<const std::string> config_lines, std::ostream& out) {
  for (const auto& line : config_lines) out << "# " << line << '\n';
  out << "split\tt1\tt2\twindow_begin\twindow_end\ttrain\tvalidation\ttest\n";
  for (const auto& r : rows) {
    out << r.split << '\t' << r.boundaries.t1 << '\t' << r.boundaries.t2 << '\t'
        << r.window_begin << '\t' << r.window_end << '\t' << r.train << '\t'
        << r.validation << '\t' << r.test << '\n';
  }
}

std::vector<SplitManifestRow> read_split_manifest(std::istream& in) {
  std::vector<SplitManifestRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto f = detail::split(line, '\t');
    if (f.size() != 8) throw ParseError(line_no, "manifest row needs 8 fields");
    SplitManifestRow r;
    r.split = detail::parse_number<std::size_t>(f[0], line_no);
    r.boundaries.t1 = detail::parse_number<Timestamp>(f[1], line_no);
    r.boundaries.t2 = detail::parse_number<Timestamp>(f[2], line_no);
    r.window_begin = detail::parse_number<std::size_t>(f[3], line_no);
    r.window_end = detail::parse_number<std::size_t>(f[4], line_no);
    r.train = detail::parse_number<std::size_t>(f[5], line_no);
    r.validation = detail::parse_number<std::size_t>(f[6], line_no);
    r.test = detail::parse_number<std::size_t>(f[7], line_no);
    rows.push_back(r);
  }
  return rows;
}

namespace {

std::filesystem::path split_subdir(const std::filesystem::path& dir, std::size_t s) {
  return dir / ("split_" + std::to_string(s));
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

std::string to_tsv(const InteractionMatrix& m) {
  std::ostringstream os;
  write_interactions(m, os);
  return os.str();
}

}  // namespace

void write_split_dir(const std::filesystem::path& dir, std::span<const SplitTriple> splits,
                     std::span<const std::string> config_lines) {
  std::vector<SplitManifestRow> rows;
  for (std::size_t s = 0; s < splits.size(); ++s) rows.push_back(manifest_row(s, splits[s]));
  std::ostringstream manifest;
  write_split_manifest(rows, config_lines, manifest);

  std::filesystem::create_directories(dir);
  for (std::size_t s = 0; s < splits.size(); ++s) {
    const auto sub = split_subdir(dir, s);
    std::filesystem::create_directories(sub);
    write_file(sub / "train.tsv", to_tsv(splits[s].train));
    write_file(sub / "validation.tsv", to_tsv(splits[s].validation));
    write_file(sub / "test.tsv", to_tsv(splits[s].test));
  }
  write_file(dir / "manifest.tsv", manifest.str());
}

std::vector<SplitTriple> load_split_dir(const std::filesystem::path& dir) {
  std::ifstream manifest_in(dir / "manifest.tsv", std::ios::binary);
  if (!manifest_in) {
    throw Error(ErrorCode::kIo, "cannot open " + (dir / "manifest.tsv").string());
  }
  const auto rows = read_split_manifest(manifest_in);
  std::vector<SplitTriple> splits;
  for (const auto& r : rows) {
    const auto sub = split_subdir(dir, r.split);
    const auto train = load_interactions(sub / "train.tsv");
    const auto validation = load_interactions(sub / "validation.tsv");
    const auto test = load_interactions(sub / "test.tsv");
    if (train.size() != r.train || validation.size() != r.validation ||
        test.size() != r.test) {
      throw Error(ErrorCode::kValidation,
                  "split " + std::to_string(r.split) + " counts disagree with manifest");
    }
    auto triple = assemble_split(train, validation, test, r.boundaries);
    triple.window_begin = r.window_begin;
    triple.window_end = r.window_end;
    splits.push_back(std::move(triple));
  }
  return splits;
}

std::vector<MetadataRecord> load_metadata(std::istream& in) {
  std::vector<MetadataRecord> records;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (line.empty()) continue;
    const auto f = detail::split(line, '\t');
    if (f.size() != 4) {
      throw ParseError(line_no, "expected 4 tab-separated fields, got " +
                                    std::to_string(f.size()));
    }
    if (f[0].empty()) throw ParseError(line_no, "empty photo id");
    if (f[3] != "0" && f[3] != "1") {
      throw ParseError(line_no, "editors_choice must be 0 or 1");
    }
    MetadataRecord r;
    r.photo_id = std::string(f[0]);
    for (auto tok : detail::split(f[1], ',')) {
      if (!tok.empty()) r.categories.emplace(tok);
    }
    for (auto tok : detail::split(f[2], ',')) {
      if (!tok.empty()) r.keywords.emplace(tok);
    }
    r.editors_choice = f[3] == "1";
    if (!seen.insert(r.photo_id).second) {
      throw Error(ErrorCode::kValidation, "line " + std::to_string(line_no) +
                                              ": duplicate photo id '" + r.photo_id + "'");
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<MetadataRecord> load_metadata(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return load_metadata(in);
}

std::vector<std::string> metadata_vocabulary(std::span<const MetadataRecord> records) {
  std::set<std::string> vocab;
  for (const auto& r : records) {
    vocab.insert(r.categories.begin(), r.categories.end());
    vocab.insert(r.keywords.begin(), r.keywords.end());
  }
  return {vocab.begin(), vocab.end()};
}

FeatureTable metadata_to_features(std::span<const MetadataRecord> records,
                                  const std::optional<std::vector<std::string>>& vocabulary) {
  auto vocab = vocabulary ? *vocabulary : metadata_vocabulary(records);
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());

  const auto dim = static_cast<std::uint32_t>(vocab.size() + 1);
  FeatureTable table(dim);
  auto mark = [&](std::vector<float>& v, const std::string& token) {
    auto it = std::lower_bound(vocab.begin(), vocab.end(), token);
    if (it != vocab.end() && *it == token) v[static_cast<std::size_t>(it - vocab.begin())] = 1.0f;
  };
  for (const auto& r : records) {
    std::vector<float> v(dim, 0.0f);
    for (const auto& t : r.categories) mark(v, t);
    for (const auto& t : r.keywords) mark(v, t);
    v.back() = r.editors_choice ? 1.0f : 0.0f;
    table.insert(r.photo_id, std::move(v));
  }
  return table;
}

}  // namespace aesthrec::dataset
