#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "villi/augment.hpp"
#include "villi/image.hpp"
#include "villi/rng.hpp"
#include "villi/simulator.hpp"

namespace villi {

/// Object-count matching strategy between the real-image domain and the
/// simulated-mask domain.
enum class MatchingMode { kMicro, kMacro };

std::string to_string(MatchingMode mode);
MatchingMode parse_matching_mode(const std::string& s);

/// One training mini-batch: real patches paired with augmented simulated
/// masks. counts[i] is the stick count of the mask paired with reals[i].
struct PairedBatch {
  std::vector<GrayImage> reals;
  std::vector<GrayImage> masks;  // augmented (domain M_A)
  std::vector<int> counts;

  std::size_t size() const { return reals.size(); }
};

/// A fully materialized pair as produced for on-disk datasets; keeps the
/// clean mask alongside the augmented one.
struct DatasetItem {
  GrayImage real;
  MaskImage clean_mask;
  GrayImage aug_mask;
  int count = 0;
};

/// Simulates and augments one mask per real patch. Micro mode pairs each
/// patch with a mask of exactly its precomputed count estimate; macro mode
/// draws counts i.i.d. from `dist`. Mask layout is always random; nothing
/// about the real patch is consumed beyond its dimensions and its count.
/// Simulation and augmentation use separate streams derived from `rng`, so
/// for a fixed seed the clean masks are invariant across augmentation
/// designs.
std::vector<DatasetItem> build_items(
    std::span<const GrayImage> reals, MatchingMode mode,
    std::optional<std::span<const int>> count_estimates,
    const CountDistribution& dist, const AugmentationConfig& aug, Rng& rng);

/// build_items repackaged as one training mini-batch.
PairedBatch build_batch(std::span<const GrayImage> reals, MatchingMode mode,
                        std::optional<std::span<const int>> count_estimates,
                        const CountDistribution& dist,
                        const AugmentationConfig& aug, Rng& rng);

/// n random square crops (with replacement) from the source images.
std::vector<GrayImage> extract_real_patches(std::span<const GrayImage> images,
                                            int n, int patch, Rng& rng);

}  // namespace villi
