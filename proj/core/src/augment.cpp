#include "villi/augment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "villi/simulator.hpp"

namespace villi {

void AugmentationConfig::validate() const {
  if (noise && !smooth)
    throw std::invalid_argument(
        "AugmentationConfig: noise requires smooth (cumulative designs only)");
  if (brightness && !(smooth && noise))
    throw std::invalid_argument(
        "AugmentationConfig: brightness requires smooth and noise "
        "(cumulative designs only)");
  if (smooth_kernel < 3 || smooth_kernel % 2 == 0)
    throw std::invalid_argument(
        "AugmentationConfig: smooth_kernel must be odd and >= 3");
  if (smooth_sigma <= 0.0)
    throw std::invalid_argument("AugmentationConfig: smooth_sigma must be > 0");
  if (noise_sigma < 0.0)
    throw std::invalid_argument("AugmentationConfig: noise_sigma must be >= 0");
}

std::vector<double> make_gaussian_kernel(int kernel, double sigma) {
  if (kernel < 1 || kernel % 2 == 0)
    throw std::invalid_argument("make_gaussian_kernel: kernel must be odd");
  if (sigma <= 0.0)
    throw std::invalid_argument("make_gaussian_kernel: sigma must be > 0");
  const int half = kernel / 2;
  std::vector<double> k(static_cast<std::size_t>(kernel) * kernel);
  double sum = 0.0;
  for (int dy = -half; dy <= half; ++dy) {
    for (int dx = -half; dx <= half; ++dx) {
      const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      k[static_cast<std::size_t>(dy + half) * kernel + (dx + half)] = w;
      sum += w;
    }
  }
  for (double& w : k) w /= sum;
  return k;
}

GrayImage assign_brightness(const MaskImage& mask, Rng& rng) {
  if (!mask.sticks.has_value())
    throw std::invalid_argument(
        "assign_brightness: mask does not carry its stick list");
  GrayImage out(mask.width, mask.height);
  for (const Stick& stick : *mask.sticks) {
    const int intensity = rng.uniform_int(200, 255);
    const double r = 0.5 * std::hypot(static_cast<double>(stick.length),
                                      static_cast<double>(stick.width));
    const int x0 = std::max(0, static_cast<int>(std::ceil(stick.center_x - r)));
    const int x1 = std::min(mask.width - 1,
                            static_cast<int>(std::floor(stick.center_x + r)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(stick.center_y - r)));
    const int y1 = std::min(mask.height - 1,
                            static_cast<int>(std::floor(stick.center_y + r)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if (stick_covers(stick, x, y)) {
          out.at(x, y) = std::max<std::uint8_t>(
              out.at(x, y), static_cast<std::uint8_t>(intensity));
        }
      }
    }
  }
  return out;
}

namespace {

// Reflect index into [0, n) mirroring at the edges (…, 1, 0 | 0, 1, …).
int reflect_index(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

}  // namespace

GrayImage gaussian_smooth(const GrayImage& img, int kernel, double sigma) {
  const std::vector<double> k = make_gaussian_kernel(kernel, sigma);
  const int half = kernel / 2;
  GrayImage out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      for (int dy = -half; dy <= half; ++dy) {
        const int sy = reflect_index(y + dy, img.height);
        for (int dx = -half; dx <= half; ++dx) {
          const int sx = reflect_index(x + dx, img.width);
          acc += k[static_cast<std::size_t>(dy + half) * kernel + (dx + half)] *
                 img.at(sx, sy);
        }
      }
      out.at(x, y) = static_cast<std::uint8_t>(
          std::clamp(std::lround(acc), 0L, 255L));
    }
  }
  return out;
}

GrayImage add_noise(const GrayImage& img, double sigma, Rng& rng) {
  if (sigma < 0.0)
    throw std::invalid_argument("add_noise: sigma must be >= 0");
  if (sigma == 0.0) return img;
  GrayImage out(img.width, img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const double v = img.pixels[i] + rng.gaussian(0.0, sigma);
    out.pixels[i] =
        static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  }
  return out;
}

GrayImage apply(const MaskImage& mask, const AugmentationConfig& cfg,
                Rng& rng) {
  cfg.validate();
  GrayImage img =
      cfg.brightness ? assign_brightness(mask, rng) : mask_to_gray(mask);
  if (cfg.smooth)
    img = gaussian_smooth(img, cfg.smooth_kernel, cfg.smooth_sigma);
  if (cfg.noise) img = add_noise(img, cfg.noise_sigma, rng);
  return img;
}

}  // namespace villi
