#include "aesthrec/kernels.hpp"

#include <algorithm>

#include "text_util.hpp"

namespace aesthrec {

std::string_view to_string(Kernel kernel) noexcept {
  switch (kernel) {
    case Kernel::kCosine: return "cosine";
    case Kernel::kEuclidean: return "euclidean";
    case Kernel::kPearson: return "pearson";
  }
  return "unknown";
}

Kernel parse_kernel(std::string_view text) {
  for (auto k : kAllKernels) {
    if (to_string(k) == text) return k;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown kernel '" + std::string(text) +
                                               "' (expected cosine|pearson|euclidean)");
}

std::vector<Kernel> parse_kernel_list(std::string_view text) {
  std::vector<Kernel> out;
  for (auto tok : detail::split(text, ',')) out.push_back(parse_kernel(tok));
  return out;
}

double binary_similarity(Kernel kernel, std::size_t overlap, std::size_t ones_a,
                         std::size_t ones_b, std::size_t rows) {
  switch (kernel) {
    case Kernel::kCosine: {
      if (ones_a == 0 || ones_b == 0) return 0.0;
      return static_cast<double>(overlap) /
             std::sqrt(static_cast<double>(ones_a) * static_cast<double>(ones_b));
    }
    case Kernel::kEuclidean: {
      const auto sq = ones_a + ones_b - 2 * overlap;
      return 1.0 / (1.0 + std::sqrt(static_cast<double>(sq)));
    }
    case Kernel::kPearson: {
      // Scaled by rows^2 throughout so numerator and variances stay integral.
      const auto m = static_cast<std::int64_t>(rows);
      const auto a = static_cast<std::int64_t>(ones_a);
      const auto b = static_cast<std::int64_t>(ones_b);
      const auto c = static_cast<std::int64_t>(overlap);
      const std::int64_t var_a = m * a - a * a;
      const std::int64_t var_b = m * b - b * b;
      if (var_a == 0 || var_b == 0) return 0.0;
      const double cov = static_cast<double>(m * c - a * b);
      return cov / (std::sqrt(static_cast<double>(var_a)) * std::sqrt(static_cast<double>(var_b)));
    }
  }
  return 0.0;
}

double binary_similarity(Kernel kernel, std::span<const std::uint32_t> a,
                         std::span<const std::uint32_t> b, std::size_t rows) {
  std::size_t overlap = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++overlap;
      ++ia;
      ++ib;
    }
  }
  return binary_similarity(kernel, overlap, a.size(), b.size(), rows);
}

}  // namespace aesthrec
