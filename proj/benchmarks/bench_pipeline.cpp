// Microbenchmarks for the hot paths: rasterization, augmentation,
// counting, network forward passes, and evaluation. All inputs are
// generated once per benchmark from fixed seeds.

#include <benchmark/benchmark.h>

#include <vector>

#include "villi/augment.hpp"
#include "villi/counting.hpp"
#include "villi/evaluate.hpp"
#include "villi/image.hpp"
#include "villi/nn/layers.hpp"
#include "villi/rng.hpp"
#include "villi/segmentation.hpp"
#include "villi/simulator.hpp"
#include "villi/stitcher.hpp"
#include "villi/synthesis.hpp"

namespace {

using namespace villi;

GrayImage random_gray(Rng& rng, int w, int h) {
  GrayImage img(w, h);
  for (auto& px : img.pixels)
    px = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
  return img;
}

MaskImage random_mask(Rng& rng, int w, int h, double density) {
  MaskImage m(w, h);
  for (auto& px : m.pixels)
    px = rng.uniform_real(0.0, 1.0) < density ? 1 : 0;
  return m;
}

void bm_rasterize(benchmark::State& state) {
  Rng rng(1);
  const ImageSize size{256, 256};
  std::vector<Stick> sticks;
  for (int i = 0; i < 30; ++i) sticks.push_back(sample_stick(rng, size));
  for (auto _ : state) {
    MaskImage m = rasterize(sticks, size);
    benchmark::DoNotOptimize(m.pixels.data());
  }
}
BENCHMARK(bm_rasterize);

void bm_gaussian_smooth(benchmark::State& state) {
  Rng rng(2);
  const GrayImage img = random_gray(rng, 256, 256);
  for (auto _ : state) {
    GrayImage out = gaussian_smooth(img, 7, 1.3);
    benchmark::DoNotOptimize(out.pixels.data());
  }
}
BENCHMARK(bm_gaussian_smooth);

void bm_otsu_threshold(benchmark::State& state) {
  Rng rng(3);
  const GrayImage img = random_gray(rng, 256, 256);
  for (auto _ : state) benchmark::DoNotOptimize(otsu_threshold(img));
}
BENCHMARK(bm_otsu_threshold);

void bm_count_components(benchmark::State& state) {
  Rng rng(4);
  const MaskImage m = random_mask(rng, 256, 256, 0.3);
  for (auto _ : state)
    benchmark::DoNotOptimize(count_components(m, kDefaultMinArea).count);
}
BENCHMARK(bm_count_components);

void bm_conv2d_forward(benchmark::State& state) {
  nn::Conv2d conv(16, 16, 3, 1, 1);
  Rng rng(5);
  conv.init_he(rng);
  nn::Tensor x(16, 64, 64);
  for (auto& val : x.v) val = static_cast<float>(rng.uniform_real(-1.0, 1.0));
  for (auto _ : state) {
    nn::Tensor y = conv.forward(x);
    benchmark::DoNotOptimize(y.v.data());
  }
}
BENCHMARK(bm_conv2d_forward);

void bm_unet_forward(benchmark::State& state) {
  UNet net(8, 6);
  Rng rng(7);
  nn::Tensor x(1, 64, 64);
  for (auto& val : x.v) val = static_cast<float>(rng.uniform_real(0.0, 1.0));
  for (auto _ : state) {
    nn::Tensor y = net.forward(x);
    benchmark::DoNotOptimize(y.v.data());
  }
}
BENCHMARK(bm_unet_forward);

void bm_generator_forward(benchmark::State& state) {
  GeneratorModel gen =
      make_generator(Direction::kMaskToImage, {8, 2}, 8);
  Rng rng(9);
  const GrayImage img = random_gray(rng, 64, 64);
  for (auto _ : state) {
    GrayImage out = translate(gen, img);
    benchmark::DoNotOptimize(out.pixels.data());
  }
}
BENCHMARK(bm_generator_forward);

void bm_dice_score(benchmark::State& state) {
  Rng rng(10);
  const MaskImage a = random_mask(rng, 256, 256, 0.2);
  const MaskImage b = random_mask(rng, 256, 256, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(dice_score(a, b));
}
BENCHMARK(bm_dice_score);

void bm_dilate_to_width(benchmark::State& state) {
  Rng rng(11);
  MaskImage sparse(256, 256);
  for (int i = 0; i < 600; ++i)
    sparse.at(rng.uniform_int(0, 255), rng.uniform_int(0, 255)) = 1;
  const CenterlineAnnotation ann{sparse, 0};
  for (auto _ : state) {
    MaskImage out = dilate_to_width(ann, 5);
    benchmark::DoNotOptimize(out.pixels.data());
  }
}
BENCHMARK(bm_dilate_to_width);

void bm_split_stitch(benchmark::State& state) {
  Rng rng(12);
  Frame frame;
  frame.image = random_gray(rng, kFrameSize, kFrameSize);
  for (auto _ : state) {
    Frame back = stitch(split_quadrants(frame));
    benchmark::DoNotOptimize(back.image.pixels.data());
  }
}
BENCHMARK(bm_split_stitch);

}  // namespace

BENCHMARK_MAIN();
