#pragma once

#include <vector>

#include "villi/image.hpp"
#include "villi/rng.hpp"

namespace villi {

/// Mask augmentation flags and parameters. Only the cumulative designs are
/// valid: {}, {smooth}, {smooth, noise}, {smooth, noise, brightness}.
struct AugmentationConfig {
  bool smooth = false;
  bool noise = false;
  bool brightness = false;
  int smooth_kernel = 5;
  double smooth_sigma = 1.0;
  double noise_sigma = 25.0;

  /// Throws std::invalid_argument on a non-cumulative flag combination or
  /// bad kernel/sigma parameters.
  void validate() const;

  /// Design index 1..4 in the cumulative order above.
  int design_index() const {
    return 1 + (smooth ? 1 : 0) + (noise ? 1 : 0) + (brightness ? 1 : 0);
  }
};

/// Normalized k x k Gaussian kernel (weights sum to 1), row-major.
std::vector<double> make_gaussian_kernel(int kernel, double sigma);

/// Paints each stick with its own intensity drawn uniformly from [200, 255];
/// background stays 0 and overlaps take the maximum intensity. Requires the
/// mask to carry its stick list.
GrayImage assign_brightness(const MaskImage& mask, Rng& rng);

/// 2D convolution with a normalized Gaussian kernel, reflect padding at the
/// borders, rounded to integers and clipped to [0, 255].
GrayImage gaussian_smooth(const GrayImage& img, int kernel, double sigma);

/// Adds independent per-pixel Gaussian noise (mean 0, given sigma), then
/// clips to [0, 255]. sigma == 0 is the identity.
GrayImage add_noise(const GrayImage& img, double sigma, Rng& rng);

/// Full augmentation pipeline: brightness assignment (or plain {0, 255}
/// scaling when brightness is off), then smoothing, then noise.
GrayImage apply(const MaskImage& mask, const AugmentationConfig& cfg,
                Rng& rng);

}  // namespace villi
