#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aesthrec/error.hpp"

namespace aesthrec {

// Declaration order is the tie-break order used by every selection routine.
enum class Kernel { kCosine, kEuclidean, kPearson };

inline constexpr Kernel kAllKernels[] = {Kernel::kCosine, Kernel::kEuclidean, Kernel::kPearson};

std::string_view to_string(Kernel kernel) noexcept;
// "cosine" | "euclidean" | "pearson".
Kernel parse_kernel(std::string_view text);
// Comma-separated list of kernel names.
std::vector<Kernel> parse_kernel_list(std::string_view text);

namespace detail {

inline void require_same_dimension(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kInvalidArgument, "dimension mismatch: " + std::to_string(a) +
                                                 " vs " + std::to_string(b));
  }
}

// x.y / (|x| |y|), 0 when either norm is 0.
template <typename T>
double cosine_impl(std::span<const T> x, std::span<const T> y) {
  detail::require_same_dimension(x.size(), y.size());
  double dot = 0, xx = 0, yy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = x[i], b = y[i];
    dot += a * b;
    xx += a * a;
    yy += b * b;
  }
  if (xx == 0.0 || yy == 0.0) return 0.0;
  return dot / (std::sqrt(xx) * std::sqrt(yy));
}

// Cosine of the mean-centred vectors; 0 on zero variance.
template <typename T>
double pearson_impl(std::span<const T> x, std::span<const T> y) {
  detail::require_same_dimension(x.size(), y.size());
  if (x.size() < 2) throw Error(ErrorCode::kInvalidArgument, "pearson needs length >= 2");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double dot = 0, xx = 0, yy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = x[i] - mx, b = y[i] - my;
    dot += a * b;
    xx += a * a;
    yy += b * b;
  }
  if (xx == 0.0 || yy == 0.0) return 0.0;
  return dot / (std::sqrt(xx) * std::sqrt(yy));
}

// 1 / (1 + |x - y|).
template <typename T>
double euclidean_impl(std::span<const T> x, std::span<const T> y) {
  detail::require_same_dimension(x.size(), y.size());
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = static_cast<double>(x[i]) - static_cast<double>(y[i]);
    ss += d * d;
  }
  return 1.0 / (1.0 + std::sqrt(ss));
}

template <typename T>
double similarity_impl(Kernel kernel, std::span<const T> x, std::span<const T> y) {
  switch (kernel) {
    case Kernel::kCosine: return cosine_impl(x, y);
    case Kernel::kEuclidean: return euclidean_impl(x, y);
    case Kernel::kPearson: return pearson_impl(x, y);
  }
  return 0.0;
}

}  // namespace detail

inline double cosine(std::span<const double> x, std::span<const double> y) {
  return detail::cosine_impl(x, y);
}
inline double cosine(std::span<const float> x, std::span<const float> y) {
  return detail::cosine_impl(x, y);
}
inline double pearson(std::span<const double> x, std::span<const double> y) {
  return detail::pearson_impl(x, y);
}
inline double pearson(std::span<const float> x, std::span<const float> y) {
  return detail::pearson_impl(x, y);
}
inline double euclidean_sim(std::span<const double> x, std::span<const double> y) {
  return detail::euclidean_impl(x, y);
}
inline double euclidean_sim(std::span<const float> x, std::span<const float> y) {
  return detail::euclidean_impl(x, y);
}
inline double similarity(Kernel kernel, std::span<const double> x, std::span<const double> y) {
  return detail::similarity_impl(kernel, x, y);
}
inline double similarity(Kernel kernel, std::span<const float> x, std::span<const float> y) {
  return detail::similarity_impl(kernel, x, y);
}

// Kernels on binary columns of length `rows`, given only the number of ones
// in each column and in their intersection. Pearson centres over all rows.
double binary_similarity(Kernel kernel, std::size_t overlap, std::size_t ones_a,
                         std::size_t ones_b, std::size_t rows);

// Same, on sorted index lists of the ones.
double binary_similarity(Kernel kernel, std::span<const std::uint32_t> a,
                         std::span<const std::uint32_t> b, std::size_t rows);

}  // namespace aesthrec
