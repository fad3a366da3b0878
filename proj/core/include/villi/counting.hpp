#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "villi/image.hpp"

namespace villi {

/// Result of tip-channel object counting.
struct CountEstimate {
  int count = 0;
  int threshold_used = 0;  // 0 when no thresholding was involved
  int min_area_used = 1;
};

/// Global intensity threshold selection: Otsu's histogram method or a
/// caller-supplied fixed value.
struct ThresholdMethod {
  enum class Kind { kOtsu, kFixed };
  Kind kind = Kind::kOtsu;
  int fixed_value = 0;

  static ThresholdMethod otsu() { return {Kind::kOtsu, 0}; }
  static ThresholdMethod fixed(int value);
};

inline constexpr int kDefaultMinArea = 2;

/// Tip signal per pixel: max(0, G - max(R, B)). Magenta bodies (high red and
/// blue) and white overlap regions are suppressed, isolated green tips pass.
GrayImage extract_tip_channel(const FluorescenceFrame& frame);

/// Otsu threshold from the 256-bin histogram: the smallest t maximizing the
/// between-class variance of the {<= t, > t} split.
int otsu_threshold(const GrayImage& img);

/// Foreground iff pixel value > threshold.
MaskImage binarize(const GrayImage& img, const ThresholdMethod& method);

/// Number of 8-connected foreground components with area >= min_area.
CountEstimate count_components(const MaskImage& mask, int min_area);

/// extract_tip_channel -> binarize -> count_components.
CountEstimate estimate_count(const FluorescenceFrame& frame,
                             const ThresholdMethod& method,
                             int min_area = kDefaultMinArea);

/// Reads a counts CSV (header line, then filename,count[,...] rows) into a
/// filename -> count map. Extra columns are ignored.
std::map<std::string, int> read_counts_csv(const std::filesystem::path& path);

}  // namespace villi
