#include "villi/stitcher.hpp"

#include <stdexcept>

namespace villi {

namespace {
constexpr int kHalf = kFrameSize / 2;
}

std::array<GrayImage, 4> split_quadrants(const Frame& frame) {
  if (frame.image.width != kFrameSize || frame.image.height != kFrameSize)
    throw std::invalid_argument("split_quadrants: frame must be 256x256");
  std::array<GrayImage, 4> q;
  for (int i = 0; i < 4; ++i) q[i] = GrayImage(kHalf, kHalf);
  for (int y = 0; y < kFrameSize; ++y)
    for (int x = 0; x < kFrameSize; ++x) {
      const int qi = (y / kHalf) * 2 + (x / kHalf);
      q[qi].at(x % kHalf, y % kHalf) = frame.image.at(x, y);
    }
  return q;
}

Frame stitch(const std::array<GrayImage, 4>& quadrants, int frame_index) {
  for (const GrayImage& q : quadrants)
    if (q.width != kHalf || q.height != kHalf)
      throw std::invalid_argument("stitch: quadrants must be 128x128");
  Frame frame;
  frame.image = GrayImage(kFrameSize, kFrameSize);
  frame.frame_index = frame_index;
  for (int y = 0; y < kFrameSize; ++y)
    for (int x = 0; x < kFrameSize; ++x) {
      const int qi = (y / kHalf) * 2 + (x / kHalf);
      frame.image.at(x, y) = quadrants[qi].at(x % kHalf, y % kHalf);
    }
  return frame;
}

MaskImage segment_frame(const PatchPredictor& predictor, const Frame& frame,
                        double threshold) {
  if (!predictor) throw std::invalid_argument("segment_frame: null predictor");
  const std::array<GrayImage, 4> quadrants = split_quadrants(frame);

  // Stitch the four probability maps, then threshold once globally.
  FloatImage prob(kFrameSize, kFrameSize);
  for (int qi = 0; qi < 4; ++qi) {
    FloatImage p = predictor(quadrants[qi]);
    if (p.width != kHalf || p.height != kHalf)
      p = resize_bilinear(p, kHalf, kHalf);
    const int x0 = (qi % 2) * kHalf;
    const int y0 = (qi / 2) * kHalf;
    for (int y = 0; y < kHalf; ++y)
      for (int x = 0; x < kHalf; ++x)
        prob.at(x0 + x, y0 + y) = p.at(x, y);
  }

  MaskImage out(kFrameSize, kFrameSize);
  for (std::size_t i = 0; i < prob.pixels.size(); ++i)
    out.pixels[i] = prob.pixels[i] > threshold ? 1 : 0;
  return out;
}

MaskImage segment_frame(SegmentationModel& model, const Frame& frame,
                        double threshold) {
  return segment_frame(
      [&model](const GrayImage& patch) { return predict(model, patch); },
      frame, threshold);
}

}  // namespace villi
