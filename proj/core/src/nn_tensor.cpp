#include "villi/nn/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace villi::nn {

Tensor to_tensor_symmetric(const GrayImage& img) {
  Tensor t(1, img.height, img.width);
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    t.v[i] = static_cast<float>(img.pixels[i]) / 127.5f - 1.f;
  return t;
}

GrayImage from_tensor_symmetric(const Tensor& t) {
  GrayImage img(t.w, t.h);
  for (std::size_t i = 0; i < t.v.size(); ++i) {
    const float v = (std::clamp(t.v[i], -1.f, 1.f) + 1.f) * 127.5f;
    img.pixels[i] = static_cast<std::uint8_t>(std::lround(v));
  }
  return img;
}

Tensor to_tensor_unit(const GrayImage& img) {
  Tensor t(1, img.height, img.width);
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    t.v[i] = static_cast<float>(img.pixels[i]) / 255.f;
  return t;
}

FloatImage to_prob_map(const Tensor& t) {
  FloatImage out(t.w, t.h);
  for (std::size_t i = 0; i < t.v.size(); ++i)
    out.pixels[i] = std::clamp(t.v[i], 0.f, 1.f);
  return out;
}

}  // namespace villi::nn
