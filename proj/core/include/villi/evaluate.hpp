#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "villi/image.hpp"

namespace villi {

/// One-pixel-wide centerline fragments for one test frame.
struct CenterlineAnnotation {
  MaskImage pixels;
  int frame_index = 0;
};

inline constexpr int kMinDilationWidth = 1;
inline constexpr int kMaxDilationWidth = 5;

/// Ground-truth mask of stroke width w: every pixel within Euclidean
/// distance (w - 1) / 2 of a centerline pixel (disk structuring element).
/// w = 1 is the identity. Even widths cannot be centered on a pixel grid and
/// collapse to the radius of width w - 1 with a fuller diagonal ring.
MaskImage dilate_to_width(const CenterlineAnnotation& ann, int w);

/// 2|P∩G| / (|P| + |G|); both masks empty -> 1.0.
double dice_score(const MaskImage& pred, const MaskImage& gt);

/// One report row: per-width mean Dice over index-paired frames, with the
/// per-frame values retained. Experiment metadata is filled by the caller.
struct DiceReportRow {
  std::string experiment_id;
  std::string matching;  // "micro" | "macro"
  bool smooth = false;
  bool noise = false;
  bool brightness = false;
  std::vector<int> widths;
  std::vector<double> mean_dice;                // parallel to widths
  std::vector<std::vector<double>> per_frame;   // [width index][frame]
};

struct DiceReport {
  std::vector<DiceReportRow> rows;

  /// Columns: experiment_id, matching, smooth, noise, brightness, then one
  /// D_w<k> column per width. All rows must share one width list. Contains
  /// no timestamps, so identical reports serialize byte-identically.
  void write_csv(const std::filesystem::path& path) const;
};

inline const std::vector<int> kReportWidths = {1, 2, 3, 4, 5};

DiceReportRow evaluate(std::span<const MaskImage> preds,
                       std::span<const CenterlineAnnotation> anns,
                       std::span<const int> widths);

}  // namespace villi
