#pragma once

#include <filesystem>
#include <vector>

#include "villi/evaluate.hpp"
#include "villi/image.hpp"
#include "villi/rng.hpp"
#include "villi/simulator.hpp"

namespace villi {

// Synthetic stand-in for the private microscopy data: stick bodies rendered
// magenta, one green marker at a stick end, a grayscale pseudo-recording of
// the bodies, and the exact centerline annotation. Markers are rejection-
// sampled to be in-bounds and mutually non-touching so tip counting is exact
// by construction.

struct DemoFrame {
  FluorescenceFrame fluor;
  GrayImage pseudo_real;  // body raster after brightness/smooth/noise
  MaskImage body_mask;    // retains its stick list
  CenterlineAnnotation centerline;
  int count = 0;
};

DemoFrame make_demo_frame(ImageSize size, const CountDistribution& counts,
                          Rng& rng);

struct DemoDatasetSpec {
  int n_reals = 16;
  int patch_size = 48;
  int n_frames = 4;  // test frames, always kFrameSize square
  CountDistribution patch_counts{4, 10};
  CountDistribution frame_counts{11, 63};
  std::uint64_t seed = 0;
};

/// Writes the on-disk layout the experiment runner consumes:
///   dir/reals/patch_NNNN.png      grayscale pseudo-real patches
///   dir/fluor/patch_NNNN.png      the matching RGB fluorescence patches
///   dir/counts.csv                tip-count estimates for the patches
///   dir/frames/frame_NNN.png      256x256 grayscale test frames
///   dir/annotations/frame_NNN.png 0/255 centerline masks
/// counts.csv is produced by running the real counting pipeline on the
/// generated fluorescence patches, not by copying the known counts.
void write_demo_dataset(const std::filesystem::path& dir,
                        const DemoDatasetSpec& spec);

}  // namespace villi
