#pragma once

#include <filesystem>
#include <span>

#include "villi/image.hpp"
#include "villi/rng.hpp"

namespace villi {

struct ImageSize {
  int width = 128;
  int height = 128;
};

/// Inclusive uniform range for macro-level object counts.
struct CountDistribution {
  int low = 11;
  int high = 63;
};

// Stick parameter ranges enforced by the simulator.
inline constexpr int kStickWidthMin = 2;
inline constexpr int kStickWidthMax = 4;
inline constexpr int kStickLengthMin = 9;
inline constexpr int kStickLengthMax = 45;

/// Smallest image side sample_stick accepts: the longest stick must be
/// representable after border clipping.
inline constexpr int kMinSimulatedImageSide = 46;

/// True iff the integer pixel location (x, y) lies inside the stick's
/// rotated rectangle (closed membership). The length axis runs along
/// angle_deg, the width axis perpendicular to it.
bool stick_covers(const Stick& stick, int x, int y);

/// Draws one stick with uniform parameters: width in {2..4}, length in
/// {9..45}, angle in [0, 180), center anywhere in the image interior.
Stick sample_stick(Rng& rng, ImageSize size);

/// Unions the sticks' rotated rectangles into a binary mask. Sticks
/// reaching past the border are clipped silently. The stick list is
/// retained on the result.
MaskImage rasterize(std::span<const Stick> sticks, ImageSize size);

/// Mask with exactly `count` randomly sampled sticks; overlaps permitted.
MaskImage simulate_mask(int count, ImageSize size, Rng& rng);

/// One macro-level count drawn uniformly from [dist.low, dist.high].
int sample_macro_count(const CountDistribution& dist, Rng& rng);

/// Stick list sidecar format: one JSON object per line with fields
/// (cx, cy, angle_deg, width, length, brightness).
void write_sticks_jsonl(const std::filesystem::path& path,
                        std::span<const Stick> sticks);
std::vector<Stick> read_sticks_jsonl(const std::filesystem::path& path);

}  // namespace villi
