#pragma once

#include <array>
#include <functional>

#include "villi/image.hpp"
#include "villi/segmentation.hpp"

namespace villi {

/// Quadrants in fixed order: top-left, top-right, bottom-left, bottom-right.
std::array<GrayImage, 4> split_quadrants(const Frame& frame);

/// Inverse of split_quadrants; the result's frame_index is the argument's.
Frame stitch(const std::array<GrayImage, 4>& quadrants, int frame_index = 0);

/// Maps one quadrant-sized patch to a probability map (any square size; it
/// is resized back to the quadrant size before stitching). Lets tests drive
/// the stitching pipeline with stub predictors.
using PatchPredictor = std::function<FloatImage(const GrayImage&)>;

/// Quadrant-wise prediction: split, predict each quadrant, resize the
/// probability maps back, stitch them, then binarize once at `threshold`
/// (probability > threshold is foreground).
MaskImage segment_frame(const PatchPredictor& predictor, const Frame& frame,
                        double threshold);

/// The production path: quadrants are resized to the model's input size.
MaskImage segment_frame(SegmentationModel& model, const Frame& frame,
                        double threshold);

}  // namespace villi
