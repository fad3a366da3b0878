#pragma once

#include <filesystem>
#include <vector>

#include "villi/image.hpp"

namespace villi {

// Thin PNG codec layer. Everything here round-trips 8-bit data losslessly;
// the rest of the library never touches the codec backend directly.

GrayImage read_gray_png(const std::filesystem::path& path);
void write_gray_png(const std::filesystem::path& path, const GrayImage& img);

FluorescenceFrame read_rgb_png(const std::filesystem::path& path);
void write_rgb_png(const std::filesystem::path& path,
                   const FluorescenceFrame& frame);

/// Masks are stored on disk as {0, 255} grayscale PNGs.
MaskImage read_mask_png(const std::filesystem::path& path);
void write_mask_png(const std::filesystem::path& path, const MaskImage& mask);

/// Sorted list of *.png paths directly inside `dir`.
std::vector<std::filesystem::path> list_pngs(
    const std::filesystem::path& dir);

}  // namespace villi
