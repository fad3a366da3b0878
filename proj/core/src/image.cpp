#include "villi/image.hpp"

#include <algorithm>
#include <cmath>

namespace villi {

std::size_t MaskImage::foreground_area() const {
  return static_cast<std::size_t>(
      std::count(pixels.begin(), pixels.end(), std::uint8_t{1}));
}

namespace {

// Shared bilinear kernel. Sampling uses half-pixel centers:
// src_x = (x + 0.5) * sx - 0.5, clamped to the valid range.
template <typename Img, typename Store>
Img resize_impl(const Img& src, int out_w, int out_h, Store store) {
  if (src.width <= 0 || src.height <= 0)
    throw std::invalid_argument("resize_bilinear: empty source");
  if (out_w <= 0 || out_h <= 0)
    throw std::invalid_argument("resize_bilinear: non-positive output size");
  Img dst(out_w, out_h);
  const double sx = static_cast<double>(src.width) / out_w;
  const double sy = static_cast<double>(src.height) / out_h;
  for (int y = 0; y < out_h; ++y) {
    double fy = (y + 0.5) * sy - 0.5;
    fy = std::clamp(fy, 0.0, static_cast<double>(src.height - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, src.height - 1);
    const double wy = fy - y0;
    for (int x = 0; x < out_w; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      fx = std::clamp(fx, 0.0, static_cast<double>(src.width - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, src.width - 1);
      const double wx = fx - x0;
      const double v =
          (1.0 - wy) * ((1.0 - wx) * src.at(x0, y0) + wx * src.at(x1, y0)) +
          wy * ((1.0 - wx) * src.at(x0, y1) + wx * src.at(x1, y1));
      dst.at(x, y) = store(v);
    }
  }
  return dst;
}

}  // namespace

GrayImage resize_bilinear(const GrayImage& src, int out_w, int out_h) {
  return resize_impl(src, out_w, out_h, [](double v) {
    return static_cast<std::uint8_t>(
        std::clamp(std::lround(v), 0L, 255L));
  });
}

FloatImage resize_bilinear(const FloatImage& src, int out_w, int out_h) {
  return resize_impl(src, out_w, out_h,
                     [](double v) { return static_cast<float>(v); });
}

GrayImage mask_to_gray(const MaskImage& mask) {
  GrayImage out(mask.width, mask.height);
  for (std::size_t i = 0; i < mask.pixels.size(); ++i)
    out.pixels[i] = mask.pixels[i] ? 255 : 0;
  return out;
}

MaskImage gray_to_mask(const GrayImage& img) {
  MaskImage out(img.width, img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    out.pixels[i] = img.pixels[i] > 127 ? 1 : 0;
  return out;
}

GrayImage prob_to_gray(const FloatImage& prob) {
  GrayImage out(prob.width, prob.height);
  for (std::size_t i = 0; i < prob.pixels.size(); ++i) {
    const float p = std::clamp(prob.pixels[i], 0.f, 1.f);
    out.pixels[i] = static_cast<std::uint8_t>(std::lround(255.f * p));
  }
  return out;
}

}  // namespace villi
