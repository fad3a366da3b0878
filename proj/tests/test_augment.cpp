#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "villi/augment.hpp"
#include "villi/simulator.hpp"

using namespace villi;

namespace {

// Independent reflect index: triangle wave with period 2n (symmetric
// padding, edge pixel repeated).
int oracle_reflect(int i, int n) {
  const int p = 2 * n;
  int m = ((i % p) + p) % p;
  return m < n ? m : p - 1 - m;
}

// Direct-evaluation smoothing oracle, written against the padding definition
// rather than the production loop structure.
double oracle_smooth_at(const GrayImage& img, int x, int y, int kernel,
                        double sigma) {
  const int half = kernel / 2;
  double num = 0.0, den = 0.0;
  for (int dy = -half; dy <= half; ++dy) {
    for (int dx = -half; dx <= half; ++dx) {
      const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      const int sx = oracle_reflect(x + dx, img.width);
      const int sy = oracle_reflect(y + dy, img.height);
      num += w * img.at(sx, sy);
      den += w;
    }
  }
  return num / den;
}

}  // namespace

TEST_CASE("only cumulative augmentation designs validate") {
  AugmentationConfig cfg;
  CHECK_NOTHROW(cfg.validate());  // design 1: none
  CHECK(cfg.design_index() == 1);

  cfg.smooth = true;
  CHECK_NOTHROW(cfg.validate());  // design 2
  CHECK(cfg.design_index() == 2);

  cfg.noise = true;
  CHECK_NOTHROW(cfg.validate());  // design 3
  CHECK(cfg.design_index() == 3);

  cfg.brightness = true;
  CHECK_NOTHROW(cfg.validate());  // design 4
  CHECK(cfg.design_index() == 4);

  AugmentationConfig bad;
  bad.noise = true;  // noise without smooth
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  AugmentationConfig bad2;
  bad2.smooth = true;
  bad2.brightness = true;  // brightness without noise
  CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);

  AugmentationConfig bad3;
  bad3.brightness = true;  // brightness alone
  CHECK_THROWS_AS(bad3.validate(), std::invalid_argument);
}

TEST_CASE("kernel/sigma parameters are validated") {
  AugmentationConfig cfg;
  cfg.smooth = true;
  cfg.smooth_kernel = 4;  // even
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.smooth_kernel = 1;  // too small
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.smooth_kernel = 5;
  cfg.smooth_sigma = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.smooth_sigma = 1.0;
  cfg.noise = true;
  cfg.noise_sigma = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("gaussian kernel is normalized, symmetric and peaked") {
  const std::vector<double> k = make_gaussian_kernel(5, 1.0);
  REQUIRE(k.size() == 25);
  double sum = 0.0;
  for (double w : k) sum += w;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  // Peak at the center; 4-fold symmetry.
  const double center = k[2 * 5 + 2];
  for (double w : k) CHECK(w <= center);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) {
      CHECK(k[y * 5 + x] == doctest::Approx(k[y * 5 + (4 - x)]));
      CHECK(k[y * 5 + x] == doctest::Approx(k[(4 - y) * 5 + x]));
      CHECK(k[y * 5 + x] == doctest::Approx(k[x * 5 + y]));
    }
  // Center-to-edge ratio is fixed by the Gaussian profile.
  CHECK(center / k[2 * 5 + 1] == doctest::Approx(std::exp(0.5)));
  CHECK_THROWS_AS(make_gaussian_kernel(4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_gaussian_kernel(5, 0.0), std::invalid_argument);
}

TEST_CASE("smoothing matches direct evaluation with symmetric padding") {
  Rng rng(808);
  GrayImage img(23, 17);
  for (auto& px : img.pixels)
    px = static_cast<std::uint8_t>(rng.uniform_int(0, 255));

  for (const int kernel : {3, 5, 7}) {
    const GrayImage out = gaussian_smooth(img, kernel, 1.3);
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        const double want = oracle_smooth_at(img, x, y, kernel, 1.3);
        CHECK(std::abs(out.at(x, y) - want) <= 0.5 + 1e-9);  // rounding only
      }
    }
  }
}

TEST_CASE("smoothing preserves a constant image exactly") {
  GrayImage img(16, 16, 200);
  const GrayImage out = gaussian_smooth(img, 5, 1.0);
  for (auto px : out.pixels) CHECK(px == 200);
}

TEST_CASE("smoothing preserves total mass away from clipping") {
  // Mid-range values cannot clip, so the kernel normalization means the
  // image mean moves only by accumulated rounding.
  Rng rng(17);
  GrayImage img(32, 32);
  for (auto& px : img.pixels)
    px = static_cast<std::uint8_t>(rng.uniform_int(60, 190));
  const GrayImage out = gaussian_smooth(img, 5, 1.0);
  double before = 0.0, after = 0.0;
  for (auto px : img.pixels) before += px;
  for (auto px : out.pixels) after += px;
  CHECK(std::abs(before - after) / img.pixels.size() < 1.0);
}

TEST_CASE("noise statistics match the requested sigma") {
  GrayImage img(100, 100, 128);
  Rng rng(5150);
  const double sigma = 25.0;
  const GrayImage out = add_noise(img, sigma, rng);
  const int n = 100 * 100;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = static_cast<double>(out.pixels[i]) - 128.0;
    sum += d;
    sum_sq += d * d;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum_sq / n - mean * mean);
  CHECK(std::abs(mean) < 5.0 * sigma / std::sqrt(n));
  CHECK(std::abs(sd - sigma) < 1.0);
}

TEST_CASE("noise clips to [0,255] and sigma zero is the identity") {
  GrayImage img(50, 50, 0);
  Rng rng(2);
  const GrayImage noisy = add_noise(img, 200.0, rng);
  for (auto px : noisy.pixels) CHECK(px <= 255);

  const GrayImage same = add_noise(img, 0.0, rng);
  CHECK(same.pixels == img.pixels);
  CHECK_THROWS_AS(add_noise(img, -1.0, rng), std::invalid_argument);
}

TEST_CASE("brightness paints per stick with max on overlaps") {
  // Two perpendicular sticks crossing at the center.
  Stick a, b;
  a.center_x = b.center_x = 32.0;
  a.center_y = b.center_y = 32.0;
  a.angle_deg = 0.0;
  b.angle_deg = 90.0;
  a.width = b.width = 3;
  a.length = b.length = 21;
  const MaskImage mask = rasterize(std::vector<Stick>{a, b}, {64, 64});

  Rng rng(99);
  const GrayImage lit = assign_brightness(mask, rng);

  // Probe pixels: far ends belong to exactly one stick, the center to both.
  const int ia = lit.at(24, 32);  // stick a only
  const int ib = lit.at(32, 24);  // stick b only
  const int both = lit.at(32, 32);
  CHECK(ia >= 200);
  CHECK(ia <= 255);
  CHECK(ib >= 200);
  CHECK(ib <= 255);
  CHECK(both == std::max(ia, ib));

  // Background stays black; every painted pixel uses one of the two draws.
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) {
      if (mask.at(x, y) == 0) {
        CHECK(lit.at(x, y) == 0);
      } else {
        CHECK((lit.at(x, y) == ia || lit.at(x, y) == ib ||
               lit.at(x, y) == std::max(ia, ib)));
      }
    }
}

TEST_CASE("brightness requires the stick list") {
  MaskImage bare(8, 8);
  bare.at(2, 2) = 1;
  Rng rng(1);
  CHECK_THROWS_AS(assign_brightness(bare, rng), std::invalid_argument);
}

TEST_CASE("apply design 1 is plain 0/255 scaling") {
  Rng sim_rng(6);
  const MaskImage mask = simulate_mask(6, {64, 64}, sim_rng);
  Rng rng(7);
  const GrayImage out = apply(mask, AugmentationConfig{}, rng);
  CHECK(out.pixels == mask_to_gray(mask).pixels);
}

TEST_CASE("apply composes the stages in order") {
  Rng sim_rng(6);
  const MaskImage mask = simulate_mask(6, {64, 64}, sim_rng);

  AugmentationConfig cfg;
  cfg.smooth = true;
  Rng r1(11);
  CHECK(apply(mask, cfg, r1).pixels ==
        gaussian_smooth(mask_to_gray(mask), cfg.smooth_kernel,
                        cfg.smooth_sigma)
            .pixels);

  cfg.noise = true;
  Rng r2(11), r3(11);
  const GrayImage via_apply = apply(mask, cfg, r2);
  const GrayImage manual = add_noise(
      gaussian_smooth(mask_to_gray(mask), cfg.smooth_kernel, cfg.smooth_sigma),
      cfg.noise_sigma, r3);
  CHECK(via_apply.pixels == manual.pixels);
}

TEST_CASE("apply is deterministic per seed") {
  Rng sim_rng(8);
  const MaskImage mask = simulate_mask(10, {64, 64}, sim_rng);
  AugmentationConfig cfg;
  cfg.smooth = cfg.noise = cfg.brightness = true;
  Rng a(123), b(123), c(124);
  const GrayImage out_a = apply(mask, cfg, a);
  const GrayImage out_b = apply(mask, cfg, b);
  const GrayImage out_c = apply(mask, cfg, c);
  CHECK(out_a.pixels == out_b.pixels);
  CHECK(out_a.pixels != out_c.pixels);
}

TEST_CASE("apply rejects invalid designs") {
  Rng sim_rng(8);
  const MaskImage mask = simulate_mask(3, {64, 64}, sim_rng);
  AugmentationConfig bad;
  bad.noise = true;
  Rng rng(1);
  CHECK_THROWS_AS(apply(mask, bad, rng), std::invalid_argument);
}
