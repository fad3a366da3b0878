#include "villi/png_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <stdexcept>

namespace villi {

namespace {

cv::Mat imread_checked(const std::filesystem::path& path, int flags) {
  cv::Mat m = cv::imread(path.string(), flags);
  if (m.empty())
    throw std::runtime_error("failed to read image: " + path.string());
  return m;
}

void imwrite_checked(const std::filesystem::path& path, const cv::Mat& m) {
  if (!path.parent_path().empty())
    std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), m))
    throw std::runtime_error("failed to write image: " + path.string());
}

}  // namespace

GrayImage read_gray_png(const std::filesystem::path& path) {
  cv::Mat m = imread_checked(path, cv::IMREAD_GRAYSCALE);
  GrayImage img(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y)
    for (int x = 0; x < m.cols; ++x)
      img.at(x, y) = m.at<std::uint8_t>(y, x);
  return img;
}

void write_gray_png(const std::filesystem::path& path, const GrayImage& img) {
  cv::Mat m(img.height, img.width, CV_8UC1);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      m.at<std::uint8_t>(y, x) = img.at(x, y);
  imwrite_checked(path, m);
}

FluorescenceFrame read_rgb_png(const std::filesystem::path& path) {
  cv::Mat m = imread_checked(path, cv::IMREAD_COLOR);  // BGR
  FluorescenceFrame frame;
  frame.red = GrayImage(m.cols, m.rows);
  frame.green = GrayImage(m.cols, m.rows);
  frame.blue = GrayImage(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y) {
    for (int x = 0; x < m.cols; ++x) {
      const cv::Vec3b px = m.at<cv::Vec3b>(y, x);
      frame.blue.at(x, y) = px[0];
      frame.green.at(x, y) = px[1];
      frame.red.at(x, y) = px[2];
    }
  }
  return frame;
}

void write_rgb_png(const std::filesystem::path& path,
                   const FluorescenceFrame& frame) {
  if (!frame.channels_consistent())
    throw std::invalid_argument("write_rgb_png: channel shapes differ");
  cv::Mat m(frame.height(), frame.width(), CV_8UC3);
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      m.at<cv::Vec3b>(y, x) = cv::Vec3b(frame.blue.at(x, y),
                                        frame.green.at(x, y),
                                        frame.red.at(x, y));
    }
  }
  imwrite_checked(path, m);
}

MaskImage read_mask_png(const std::filesystem::path& path) {
  return gray_to_mask(read_gray_png(path));
}

void write_mask_png(const std::filesystem::path& path, const MaskImage& mask) {
  write_gray_png(path, mask_to_gray(mask));
}

std::vector<std::filesystem::path> list_pngs(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw std::invalid_argument("not a directory: " + dir.string());
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png")
      out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace villi
