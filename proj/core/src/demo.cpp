#include "villi/demo.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <utility>

#include "villi/augment.hpp"
#include "villi/counting.hpp"
#include "villi/png_io.hpp"

namespace villi {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTipRadius = 1.0;  // marker blob: >= 2 pixels everywhere

struct TipBlob {
  std::vector<std::pair<int, int>> pixels;
};

/// Pixels within kTipRadius of the stick's forward endpoint, or an empty
/// blob if any of them falls out of bounds.
TipBlob tip_blob(const Stick& stick, ImageSize size) {
  const double rad = stick.angle_deg * kPi / 180.0;
  const double ex = stick.center_x + 0.5 * stick.length * std::cos(rad);
  const double ey = stick.center_y + 0.5 * stick.length * std::sin(rad);
  TipBlob blob;
  const int x0 = static_cast<int>(std::floor(ex - kTipRadius));
  const int y0 = static_cast<int>(std::floor(ey - kTipRadius));
  const int x1 = static_cast<int>(std::ceil(ex + kTipRadius));
  const int y1 = static_cast<int>(std::ceil(ey + kTipRadius));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - ex, dy = y - ey;
      if (dx * dx + dy * dy > kTipRadius * kTipRadius) continue;
      if (x < 0 || x >= size.width || y < 0 || y >= size.height)
        return {};  // clipped marker: reject
      blob.pixels.emplace_back(x, y);
    }
  return blob;
}

/// True iff the blob and its 8-neighbourhood are free in `occupied`.
bool blob_is_isolated(const TipBlob& blob, const GrayImage& occupied) {
  for (const auto& [x, y] : blob.pixels)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || nx >= occupied.width || ny < 0 || ny >= occupied.height)
          continue;
        if (occupied.at(nx, ny)) return false;
      }
  return true;
}

}  // namespace

DemoFrame make_demo_frame(ImageSize size, const CountDistribution& counts,
                          Rng& rng) {
  const int count = sample_macro_count(counts, rng);

  std::vector<Stick> sticks;
  std::vector<TipBlob> blobs;
  GrayImage occupied(size.width, size.height);
  constexpr int kMaxRetries = 20000;
  for (int i = 0; i < count; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
      const Stick candidate = sample_stick(rng, size);
      TipBlob blob = tip_blob(candidate, size);
      if (blob.pixels.empty() || !blob_is_isolated(blob, occupied)) continue;
      for (const auto& [x, y] : blob.pixels) occupied.at(x, y) = 1;
      sticks.push_back(candidate);
      blobs.push_back(std::move(blob));
      placed = true;
      break;
    }
    if (!placed)
      throw std::runtime_error(
          "make_demo_frame: cannot place non-touching markers at this density");
  }

  DemoFrame frame;
  frame.count = count;
  frame.body_mask = rasterize(sticks, size);

  // Bodies magenta, markers pure green (markers overwrite body pixels so the
  // tip channel G - max(R, B) sees clean blobs).
  GrayImage body = mask_to_gray(frame.body_mask);
  GrayImage tips(size.width, size.height);
  for (const TipBlob& blob : blobs)
    for (const auto& [x, y] : blob.pixels) {
      tips.at(x, y) = 255;
      body.at(x, y) = 0;
    }
  frame.fluor.red = body;
  frame.fluor.blue = std::move(body);
  frame.fluor.green = std::move(tips);

  AugmentationConfig appearance;
  appearance.smooth = appearance.noise = appearance.brightness = true;
  frame.pseudo_real = apply(frame.body_mask, appearance, rng);

  std::vector<Stick> centerlines = sticks;
  for (Stick& s : centerlines) s.width = 1;
  frame.centerline.pixels = rasterize(centerlines, size);
  frame.centerline.pixels.sticks.reset();
  return frame;
}

void write_demo_dataset(const std::filesystem::path& dir,
                        const DemoDatasetSpec& spec) {
  if (spec.n_reals < 1 || spec.n_frames < 1)
    throw std::invalid_argument("write_demo_dataset: need at least one item");
  if (spec.patch_size < kMinSimulatedImageSide)
    throw std::invalid_argument("write_demo_dataset: patch_size too small");

  std::filesystem::create_directories(dir / "reals");
  std::filesystem::create_directories(dir / "fluor");
  std::filesystem::create_directories(dir / "frames");
  std::filesystem::create_directories(dir / "annotations");

  Rng patch_rng(derive_seed(spec.seed, "demo_patches"));
  std::ofstream counts(dir / "counts.csv");
  if (!counts)
    throw std::runtime_error("cannot open for write: " +
                             (dir / "counts.csv").string());
  counts << "filename,count,threshold_used,min_area_used\n";

  char name[48];
  for (int i = 0; i < spec.n_reals; ++i) {
    const DemoFrame f = make_demo_frame({spec.patch_size, spec.patch_size},
                                        spec.patch_counts, patch_rng);
    std::snprintf(name, sizeof(name), "patch_%04d.png", i);
    write_gray_png(dir / "reals" / name, f.pseudo_real);
    write_rgb_png(dir / "fluor" / name, f.fluor);
    const CountEstimate est =
        estimate_count(f.fluor, ThresholdMethod::otsu(), kDefaultMinArea);
    counts << name << ',' << est.count << ',' << est.threshold_used << ','
           << est.min_area_used << "\n";
  }

  Rng frame_rng(derive_seed(spec.seed, "demo_frames"));
  for (int i = 0; i < spec.n_frames; ++i) {
    const DemoFrame f = make_demo_frame({kFrameSize, kFrameSize},
                                        spec.frame_counts, frame_rng);
    std::snprintf(name, sizeof(name), "frame_%03d.png", i);
    write_gray_png(dir / "frames" / name, f.pseudo_real);
    write_mask_png(dir / "annotations" / name, f.centerline.pixels);
  }
}

}  // namespace villi
