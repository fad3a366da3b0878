#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace villi {

/// Single-channel 8-bit raster. Row-major, pixel (x, y) at y * width + x.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h),
        pixels(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  bool same_shape(const GrayImage& o) const {
    return width == o.width && height == o.height;
  }
  bool operator==(const GrayImage& o) const = default;
};

/// Single-channel float raster; used for probability maps.
struct FloatImage {
  int width = 0;
  int height = 0;
  std::vector<float> pixels;

  FloatImage() = default;
  FloatImage(int w, int h, float fill = 0.f)
      : width(w), height(h),
        pixels(static_cast<std::size_t>(w) * h, fill) {}

  float& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  float at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
};

/// Geometric parameters of one simulated stick-shaped object. Angles are in
/// degrees, [0, 180); width/length in pixels. brightness is only consumed by
/// the brightness augmentation; binary rasterization ignores it.
struct Stick {
  double center_x = 0.0;
  double center_y = 0.0;
  double angle_deg = 0.0;
  int width = 2;
  int length = 9;
  int brightness = 255;

  bool operator==(const Stick& o) const = default;
};

/// Binary mask raster (values 0/1). Masks produced by the simulator retain
/// the stick list they were rasterized from; masks loaded from plain image
/// files do not, and stick-dependent operations reject them.
struct MaskImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // each 0 or 1
  std::optional<std::vector<Stick>> sticks;

  MaskImage() = default;
  MaskImage(int w, int h)
      : width(w), height(h),
        pixels(static_cast<std::size_t>(w) * h, 0) {}

  std::uint8_t& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  bool same_shape(const MaskImage& o) const {
    return width == o.width && height == o.height;
  }
  std::size_t foreground_area() const;
};

/// Three-channel fluorescence raster. Channel layout follows the marker
/// convention used throughout: object bodies render magenta (red + blue),
/// object tips render green. pixel_size is carried as metadata only.
struct FluorescenceFrame {
  GrayImage red;
  GrayImage green;
  GrayImage blue;
  double pixel_size = 1.1;

  int width() const { return green.width; }
  int height() const { return green.height; }
  bool channels_consistent() const {
    return red.same_shape(green) && blue.same_shape(green);
  }
};

/// One full-resolution test frame (exactly 256 x 256).
struct Frame {
  GrayImage image;
  int frame_index = 0;
};

inline constexpr int kFrameSize = 256;

/// Bilinear resize with half-pixel centers; edges clamp. Deterministic and
/// shared by the synthesis and inference paths so both sides of a resize
/// round trip use identical arithmetic.
GrayImage resize_bilinear(const GrayImage& src, int out_w, int out_h);
FloatImage resize_bilinear(const FloatImage& src, int out_w, int out_h);

/// Mask scaled to {0, 255}. The stick list is not carried over.
GrayImage mask_to_gray(const MaskImage& mask);

/// value > 127 -> 1. Inverse of mask_to_gray for 0/255 images.
MaskImage gray_to_mask(const GrayImage& img);

/// Probability map -> 8-bit image, value = round(255 * p).
GrayImage prob_to_gray(const FloatImage& prob);

}  // namespace villi
