#include <opencv2/core.hpp>
#include <opencv2/core/utils/logger.hpp>
#include <opencv2/imgcodecs.hpp>

#include "aesthrec/color.hpp"

namespace aesthrec::color {

std::optional<RgbImage> decode_image(const std::filesystem::path& path) {
  cv::utils::logging::setLogLevel(cv::utils::logging::LOG_LEVEL_SILENT);
  cv::Mat bgr;
  try {
    bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  } catch (const cv::Exception&) {
    return std::nullopt;
  }
  if (bgr.empty() || bgr.type() != CV_8UC3) return std::nullopt;

  RgbImage img(static_cast<std::size_t>(bgr.cols), static_cast<std::size_t>(bgr.rows));
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      img.set(static_cast<std::size_t>(x), static_cast<std::size_t>(y), row[x][2], row[x][1],
              row[x][0]);
    }
  }
  return img;
}

}  // namespace aesthrec::color
