#pragma once

#include <cstddef>
#include <vector>

#include "villi/image.hpp"

namespace villi::nn {

/// Dense (channels, height, width) float tensor, row-major within each
/// channel. Training runs one sample at a time, so no batch axis.
struct Tensor {
  int c = 0;
  int h = 0;
  int w = 0;
  std::vector<float> v;

  Tensor() = default;
  Tensor(int c_, int h_, int w_, float fill = 0.f)
      : c(c_), h(h_), w(w_),
        v(static_cast<std::size_t>(c_) * h_ * w_, fill) {}

  std::size_t size() const { return v.size(); }
  float& at(int ch, int y, int x) {
    return v[(static_cast<std::size_t>(ch) * h + y) * w + x];
  }
  float at(int ch, int y, int x) const {
    return v[(static_cast<std::size_t>(ch) * h + y) * w + x];
  }
  bool same_shape(const Tensor& o) const {
    return c == o.c && h == o.h && w == o.w;
  }
};

/// Image (0..255) -> single-channel tensor in [-1, 1].
Tensor to_tensor_symmetric(const GrayImage& img);

/// Tensor in [-1, 1] -> image; values clipped and rounded to [0, 255].
GrayImage from_tensor_symmetric(const Tensor& t);

/// Image (0..255) -> single-channel tensor in [0, 1].
Tensor to_tensor_unit(const GrayImage& img);

/// Single-channel tensor interpreted as probabilities, clamped to [0, 1].
FloatImage to_prob_map(const Tensor& t);

}  // namespace villi::nn
