#include "villi/pairing.hpp"

#include <stdexcept>

namespace villi {

std::string to_string(MatchingMode mode) {
  return mode == MatchingMode::kMicro ? "micro" : "macro";
}

MatchingMode parse_matching_mode(const std::string& s) {
  if (s == "micro") return MatchingMode::kMicro;
  if (s == "macro") return MatchingMode::kMacro;
  throw std::invalid_argument("unknown matching mode: " + s);
}

std::vector<DatasetItem> build_items(
    std::span<const GrayImage> reals, MatchingMode mode,
    std::optional<std::span<const int>> count_estimates,
    const CountDistribution& dist, const AugmentationConfig& aug, Rng& rng) {
  aug.validate();
  if (mode == MatchingMode::kMicro) {
    if (!count_estimates.has_value())
      throw std::invalid_argument(
          "build_items: micro matching requires one count estimate per patch");
    if (count_estimates->size() != reals.size())
      throw std::invalid_argument(
          "build_items: count estimate list does not match patch list");
  }
  // Simulation and augmentation draw from separate child streams so that
  // switching the augmentation design leaves the simulated masks unchanged.
  Rng sim_rng(rng.next_u64());
  Rng aug_rng(rng.next_u64());
  std::vector<DatasetItem> items;
  items.reserve(reals.size());
  for (std::size_t i = 0; i < reals.size(); ++i) {
    DatasetItem item;
    item.real = reals[i];
    item.count = mode == MatchingMode::kMicro
                     ? (*count_estimates)[i]
                     : sample_macro_count(dist, sim_rng);
    const ImageSize size{reals[i].width, reals[i].height};
    item.clean_mask = simulate_mask(item.count, size, sim_rng);
    item.aug_mask = apply(item.clean_mask, aug, aug_rng);
    items.push_back(std::move(item));
  }
  return items;
}

PairedBatch build_batch(std::span<const GrayImage> reals, MatchingMode mode,
                        std::optional<std::span<const int>> count_estimates,
                        const CountDistribution& dist,
                        const AugmentationConfig& aug, Rng& rng) {
  std::vector<DatasetItem> items =
      build_items(reals, mode, count_estimates, dist, aug, rng);
  PairedBatch batch;
  batch.reals.reserve(items.size());
  batch.masks.reserve(items.size());
  batch.counts.reserve(items.size());
  for (DatasetItem& item : items) {
    batch.reals.push_back(std::move(item.real));
    batch.masks.push_back(std::move(item.aug_mask));
    batch.counts.push_back(item.count);
  }
  return batch;
}

std::vector<GrayImage> extract_real_patches(std::span<const GrayImage> images,
                                            int n, int patch, Rng& rng) {
  if (n < 0) throw std::invalid_argument("extract_real_patches: n < 0");
  if (patch < 1) throw std::invalid_argument("extract_real_patches: patch < 1");
  if (images.empty() && n > 0)
    throw std::invalid_argument("extract_real_patches: no source images");
  for (const GrayImage& img : images) {
    if (img.width < patch || img.height < patch)
      throw std::invalid_argument(
          "extract_real_patches: source image smaller than patch size");
  }
  std::vector<GrayImage> patches;
  patches.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const GrayImage& src =
        images[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<int>(images.size()) - 1))];
    const int x0 = rng.uniform_int(0, src.width - patch);
    const int y0 = rng.uniform_int(0, src.height - patch);
    GrayImage crop(patch, patch);
    for (int y = 0; y < patch; ++y)
      for (int x = 0; x < patch; ++x)
        crop.at(x, y) = src.at(x0 + x, y0 + y);
    patches.push_back(std::move(crop));
  }
  return patches;
}

}  // namespace villi
