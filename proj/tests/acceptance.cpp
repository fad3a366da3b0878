// Acceptance gate: ten go/no-go checks spanning the whole pipeline, from
// simulator statistics to a twice-run experiment grid. Each criterion prints
// exactly one [PASS]/[FAIL] line; the process exit code is the number of
// failures. Runtime budgets and numeric tolerances are pinned here, next to
// the checks they guard.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "villi/augment.hpp"
#include "villi/counting.hpp"
#include "villi/demo.hpp"
#include "villi/evaluate.hpp"
#include "villi/image.hpp"
#include "villi/nn/losses.hpp"
#include "villi/pairing.hpp"
#include "villi/rng.hpp"
#include "villi/runner.hpp"
#include "villi/segmentation.hpp"
#include "villi/simulator.hpp"
#include "villi/stitcher.hpp"
#include "villi/synthesis.hpp"

namespace fs = std::filesystem;
using namespace villi;

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  require(in.good(), "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Criterion 1: report layout contract.
//
// Value-level Dice targets are out of scope for this gate: reaching any
// particular score requires the original full-resolution recordings and
// full-scale training, neither of which ships with the repository. The
// report writer is therefore validated structurally: exact column set,
// exact field order, parseable per-width values.
// ---------------------------------------------------------------------------
void criterion_report_layout(const fs::path& work) {
  DiceReportRow row;
  row.experiment_id = "layout_check";
  row.matching = "macro";
  row.smooth = false;
  row.noise = true;
  row.brightness = false;
  row.widths = kReportWidths;
  row.mean_dice = {0.1, 0.2, 0.3, 0.4, 0.5};
  row.per_frame.assign(5, std::vector<double>{0.0});
  DiceReport report;
  report.rows.push_back(row);

  const fs::path csv = work / "layout_report.csv";
  report.write_csv(csv);

  std::ifstream in(csv);
  std::string header, line, extra;
  require(static_cast<bool>(std::getline(in, header)), "report has no header");
  require(header ==
              "experiment_id,matching,smooth,noise,brightness,"
              "D_w1,D_w2,D_w3,D_w4,D_w5",
          "unexpected report header: " + header);
  require(static_cast<bool>(std::getline(in, line)), "report has no data row");
  require(!std::getline(in, extra), "report has extra rows");

  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  require(fields.size() == 10, "expected 10 fields per row");
  require(fields[0] == "layout_check" && fields[1] == "macro" &&
              fields[2] == "0" && fields[3] == "1" && fields[4] == "0",
          "metadata fields serialized incorrectly");
  for (int i = 0; i < 5; ++i) {
    const double v = std::stod(fields[5 + i]);
    require(std::abs(v - 0.1 * (i + 1)) < 1e-9, "width column value drifted");
  }
}

// ---------------------------------------------------------------------------
// Criterion 2: simulator distributions and rasterizer geometry.
// ---------------------------------------------------------------------------

// Closed rotated-rectangle membership via the quad's explicit corners: the
// point must not fall strictly outside any of the four edges. Structurally
// independent of the projection arithmetic used by stick_covers.
bool corner_oracle_covers(const Stick& s, int px, int py) {
  const double rad = s.angle_deg * std::numbers::pi / 180.0;
  const double ux = std::cos(rad), uy = std::sin(rad);
  const double vx = -uy, vy = ux;
  const double hl = s.length / 2.0, hw = s.width / 2.0;
  const double cx[4] = {s.center_x + hl * ux + hw * vx,
                        s.center_x - hl * ux + hw * vx,
                        s.center_x - hl * ux - hw * vx,
                        s.center_x + hl * ux - hw * vx};
  const double cy[4] = {s.center_y + hl * uy + hw * vy,
                        s.center_y - hl * uy + hw * vy,
                        s.center_y - hl * uy - hw * vy,
                        s.center_y + hl * uy - hw * vy};
  int pos = 0, neg = 0;
  for (int i = 0; i < 4; ++i) {
    const int j = (i + 1) % 4;
    const double ex = cx[j] - cx[i], ey = cy[j] - cy[i];
    const double cross = ex * (py - cy[i]) - ey * (px - cx[i]);
    if (cross > 0) ++pos;
    if (cross < 0) ++neg;
  }
  return pos == 0 || neg == 0;
}

void criterion_simulator() {
  // Count prior: every value of the inclusive range seen with a frequency
  // within 4 sigma of the uniform expectation.
  Rng rng(101);
  const CountDistribution dist;
  constexpr int kDraws = 10000;
  std::array<int, 64> freq{};
  for (int i = 0; i < kDraws; ++i) {
    const int c = sample_macro_count(dist, rng);
    require(c >= dist.low && c <= dist.high, "macro count out of range");
    ++freq[c];
  }
  const int bins = dist.high - dist.low + 1;
  const double p = 1.0 / bins;
  const double mu = kDraws * p;
  const double sigma = std::sqrt(kDraws * p * (1.0 - p));
  for (int v = dist.low; v <= dist.high; ++v)
    require(std::abs(freq[v] - mu) <= 4.0 * sigma,
            "count " + std::to_string(v) + " frequency " +
                std::to_string(freq[v]) + " beyond 4 sigma of uniform");

  // Parameter ranges over 1,000 simulated masks.
  Rng mask_rng(202);
  const ImageSize size{64, 64};
  for (int i = 0; i < 1000; ++i) {
    const MaskImage m = simulate_mask(5, size, mask_rng);
    require(m.sticks.has_value() && m.sticks->size() == 5,
            "mask lost its stick list");
    for (const Stick& s : *m.sticks) {
      require(s.width >= kStickWidthMin && s.width <= kStickWidthMax,
              "stick width out of range");
      require(s.length >= kStickLengthMin && s.length <= kStickLengthMax,
              "stick length out of range");
      require(s.angle_deg >= 0.0 && s.angle_deg < 180.0,
              "stick angle out of range");
      require(s.center_x >= 0.0 && s.center_x < size.width &&
                  s.center_y >= 0.0 && s.center_y < size.height,
              "stick center outside the image");
    }
  }

  // Rasterizer equals the corner-geometry oracle pixel for pixel.
  Rng geo_rng(303);
  for (int i = 0; i < 20; ++i) {
    const Stick s = sample_stick(geo_rng, size);
    const MaskImage m = rasterize(std::span<const Stick>(&s, 1), size);
    for (int y = 0; y < size.height; ++y)
      for (int x = 0; x < size.width; ++x)
        require(m.at(x, y) == (corner_oracle_covers(s, x, y) ? 1 : 0),
                "rasterizer disagrees with corner oracle at (" +
                    std::to_string(x) + "," + std::to_string(y) + ")");
  }
}

// ---------------------------------------------------------------------------
// Criterion 3: component counting oracles.
// ---------------------------------------------------------------------------

// True when the candidate stick's pixels stay king-move-separated from all
// occupied pixels, which guarantees a fresh 8-connected component.
bool stick_isolated(const MaskImage& occupied, const MaskImage& candidate) {
  for (int y = 0; y < candidate.height; ++y)
    for (int x = 0; x < candidate.width; ++x) {
      if (!candidate.at(x, y)) continue;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= occupied.width ||
              ny >= occupied.height)
            continue;
          if (occupied.at(nx, ny)) return false;
        }
    }
  return true;
}

int flood_fill_count(const MaskImage& mask) {
  std::vector<std::uint8_t> seen(mask.pixels.size(), 0);
  int components = 0;
  std::deque<std::pair<int, int>> queue;
  for (int sy = 0; sy < mask.height; ++sy)
    for (int sx = 0; sx < mask.width; ++sx) {
      const std::size_t si = static_cast<std::size_t>(sy) * mask.width + sx;
      if (!mask.pixels[si] || seen[si]) continue;
      ++components;
      seen[si] = 1;
      queue.emplace_back(sx, sy);
      while (!queue.empty()) {
        const auto [x, y] = queue.front();
        queue.pop_front();
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= mask.width || ny >= mask.height)
              continue;
            const std::size_t ni =
                static_cast<std::size_t>(ny) * mask.width + nx;
            if (!mask.pixels[ni] || seen[ni]) continue;
            seen[ni] = 1;
            queue.emplace_back(nx, ny);
          }
      }
    }
  return components;
}

void criterion_counting() {
  // 500 masks whose sticks are rejection-sampled to stay mutually
  // non-touching, so the component count is known by construction.
  Rng rng(404);
  const ImageSize size{96, 96};
  for (int trial = 0; trial < 500; ++trial) {
    const int k = rng.uniform_int(3, 10);
    MaskImage occupied(size.width, size.height);
    for (int placed = 0; placed < k;) {
      const Stick s = sample_stick(rng, size);
      const MaskImage scratch = rasterize(std::span<const Stick>(&s, 1), size);
      if (scratch.foreground_area() == 0 || !stick_isolated(occupied, scratch))
        continue;
      for (std::size_t i = 0; i < occupied.pixels.size(); ++i)
        occupied.pixels[i] |= scratch.pixels[i];
      ++placed;
    }
    const CountEstimate est = count_components(occupied, 1);
    require(est.count == k, "non-touching mask with " + std::to_string(k) +
                                " sticks counted as " +
                                std::to_string(est.count));
  }

  // Flood-fill oracle equivalence on random binaries.
  Rng noise_rng(505);
  for (int trial = 0; trial < 500; ++trial) {
    MaskImage m(40, 30);
    const double density = 0.1 + 0.6 * (trial % 10) / 10.0;
    for (auto& px : m.pixels)
      px = noise_rng.uniform_real(0.0, 1.0) < density ? 1 : 0;
    require(count_components(m, 1).count == flood_fill_count(m),
            "component count disagrees with flood-fill oracle");
  }
}

// ---------------------------------------------------------------------------
// Criterion 4: micro-matching invariant on fixtures with known tip counts.
// ---------------------------------------------------------------------------
void criterion_micro_matching() {
  Rng rng(606);
  std::vector<GrayImage> reals;
  std::vector<int> counts;
  constexpr int kItems = 1000;
  reals.reserve(kItems);
  counts.reserve(kItems);
  for (int i = 0; i < kItems; ++i) {
    const DemoFrame f = make_demo_frame({48, 48}, {4, 10}, rng);
    const CountEstimate est =
        estimate_count(f.fluor, ThresholdMethod::otsu(), kDefaultMinArea);
    require(est.count == f.count, "fixture count was not recovered exactly");
    reals.push_back(f.pseudo_real);
    counts.push_back(est.count);
  }

  AugmentationConfig aug;
  aug.smooth = true;
  aug.noise = true;
  aug.brightness = true;
  Rng pair_rng(607);
  const auto items = build_items(
      reals, MatchingMode::kMicro,
      std::optional<std::span<const int>>(std::span<const int>(counts)),
      CountDistribution{}, aug, pair_rng);
  require(items.size() == static_cast<std::size_t>(kItems),
          "wrong number of paired items");
  for (int i = 0; i < kItems; ++i) {
    require(items[i].clean_mask.sticks.has_value(),
            "paired mask lost its stick list");
    require(static_cast<int>(items[i].clean_mask.sticks->size()) == counts[i],
            "item " + std::to_string(i) + " paired with " +
                std::to_string(items[i].clean_mask.sticks->size()) +
                " sticks, count estimate was " + std::to_string(counts[i]));
    require(items[i].count == counts[i], "item count metadata mismatch");
  }
}

// ---------------------------------------------------------------------------
// Criterion 5: evaluator oracles.
// ---------------------------------------------------------------------------

double set_counting_dice(const MaskImage& a, const MaskImage& b) {
  std::size_t inter = 0, total = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    inter += (a.pixels[i] && b.pixels[i]) ? 1 : 0;
    total += (a.pixels[i] ? 1 : 0) + (b.pixels[i] ? 1 : 0);
  }
  if (total == 0) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(total);
}

// All-pairs Euclidean-distance dilation: foreground iff some centerline
// pixel lies within (w - 1) / 2. Independent of the offset-stencil sweep.
MaskImage euclidean_oracle_dilate(const MaskImage& src, int w) {
  const double radius = (w - 1) / 2.0;
  const double r2 = radius * radius + 1e-12;
  MaskImage out(src.width, src.height);
  for (int y = 0; y < src.height; ++y)
    for (int x = 0; x < src.width; ++x) {
      bool hit = false;
      for (int sy = 0; sy < src.height && !hit; ++sy)
        for (int sx = 0; sx < src.width && !hit; ++sx) {
          if (!src.at(sx, sy)) continue;
          const double dx = x - sx, dy = y - sy;
          if (dx * dx + dy * dy <= r2) hit = true;
        }
      out.at(x, y) = hit ? 1 : 0;
    }
  return out;
}

MaskImage random_mask(Rng& rng, int w, int h, double density) {
  MaskImage m(w, h);
  for (auto& px : m.pixels)
    px = rng.uniform_real(0.0, 1.0) < density ? 1 : 0;
  return m;
}

void criterion_evaluator() {
  Rng rng(707);
  for (int i = 0; i < 100; ++i) {
    const double da = 0.05 + 0.9 * rng.uniform_real(0.0, 1.0);
    const double db = 0.05 + 0.9 * rng.uniform_real(0.0, 1.0);
    const MaskImage a = random_mask(rng, 32, 24, da);
    const MaskImage b = random_mask(rng, 32, 24, db);
    require(std::abs(dice_score(a, b) - set_counting_dice(a, b)) <= 1e-12,
            "dice_score drifted from set counting");
  }
  const MaskImage empty(16, 16);
  require(dice_score(empty, empty) == 1.0, "empty/empty dice must be 1");

  for (int w = kMinDilationWidth; w <= kMaxDilationWidth; ++w) {
    for (int trial = 0; trial < 8; ++trial) {
      MaskImage sparse(48, 36);
      for (int k = 0; k < 40; ++k)
        sparse.at(rng.uniform_int(0, 47), rng.uniform_int(0, 35)) = 1;
      const CenterlineAnnotation ann{sparse, trial};
      const MaskImage got = dilate_to_width(ann, w);
      const MaskImage want = euclidean_oracle_dilate(sparse, w);
      require(got.pixels == want.pixels,
              "dilation disagrees with Euclidean oracle at w=" +
                  std::to_string(w));
      if (w > kMinDilationWidth) {
        const MaskImage prev = dilate_to_width(ann, w - 1);
        require(prev.foreground_area() <= got.foreground_area(),
                "dilated area not monotone in w");
        for (std::size_t i = 0; i < prev.pixels.size(); ++i)
          require(!prev.pixels[i] || got.pixels[i],
                  "dilation at w lost a pixel present at w-1");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Criterion 6: split/stitch bit-exact round trip.
// ---------------------------------------------------------------------------
void criterion_stitcher() {
  Rng rng(808);
  for (int i = 0; i < 100; ++i) {
    Frame frame;
    frame.frame_index = i;
    frame.image = GrayImage(kFrameSize, kFrameSize);
    for (auto& px : frame.image.pixels)
      px = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    const Frame back = stitch(split_quadrants(frame), frame.frame_index);
    require(back.image.pixels == frame.image.pixels,
            "round trip altered pixel data on frame " + std::to_string(i));
    require(back.frame_index == i, "round trip lost the frame index");
  }
}

// ---------------------------------------------------------------------------
// Criterion 7: Dice-loss numerics.
// ---------------------------------------------------------------------------
void criterion_dice_numerics() {
  Rng rng(909);
  for (int trial = 0; trial < 100; ++trial) {
    FloatImage pred(16, 12);
    MaskImage target(16, 12);
    for (auto& px : pred.pixels)
      px = static_cast<float>(rng.uniform_real(0.0, 1.0));
    for (auto& px : target.pixels)
      px = rng.uniform_real(0.0, 1.0) < 0.4 ? 1 : 0;
    const double eps = 1e-6;
    double inter = 0.0, sum_p = 0.0, sum_t = 0.0;
    for (std::size_t i = 0; i < pred.pixels.size(); ++i) {
      inter += static_cast<double>(pred.pixels[i]) * target.pixels[i];
      sum_p += pred.pixels[i];
      sum_t += target.pixels[i];
    }
    const double want = 1.0 - (2.0 * inter + eps) / (sum_p + sum_t + eps);
    require(std::abs(dice_loss(pred, target, eps) - want) <= 1e-12,
            "dice_loss drifted from the formula oracle");
  }

  // Finite-difference gradient on a 5x5 double-precision input.
  constexpr int kN = 25;
  std::vector<double> p(kN), t(kN), grad(kN), fd(kN);
  for (int i = 0; i < kN; ++i) {
    p[i] = 0.05 + 0.9 * rng.uniform_real(0.0, 1.0);
    t[i] = (i % 3 == 0) ? 1.0 : 0.0;
  }
  const double eps = 1e-4;
  nn::soft_dice_loss<double>(p, t, eps, grad);
  const double h = 1e-7;
  for (int i = 0; i < kN; ++i) {
    std::vector<double> scratch(kN);
    std::vector<double> plus = p, minus = p;
    plus[i] += h;
    minus[i] -= h;
    const double lp = nn::soft_dice_loss<double>(plus, t, eps, scratch);
    const double lm = nn::soft_dice_loss<double>(minus, t, eps, scratch);
    fd[i] = (lp - lm) / (2.0 * h);
    const double rel =
        std::abs(fd[i] - grad[i]) / std::max({std::abs(fd[i]),
                                              std::abs(grad[i]), 1e-8});
    require(rel <= 1e-4, "dice gradient off by relative " +
                             std::to_string(rel) + " at index " +
                             std::to_string(i));
  }
}

// ---------------------------------------------------------------------------
// Criteria 8/9 shared fixtures: tiny hand-built stick scenes. Sticks are
// placed directly (bypassing the simulator's minimum image side) so the toy
// networks can train on 32x32 inputs.
// ---------------------------------------------------------------------------
MaskImage tiny_scene(Rng& rng, int side) {
  std::vector<Stick> sticks;
  for (int i = 0; i < 3; ++i) {
    Stick s;
    s.center_x = rng.uniform_real(side * 0.25, side * 0.75);
    s.center_y = rng.uniform_real(side * 0.25, side * 0.75);
    s.angle_deg = rng.uniform_real(0.0, 180.0);
    s.width = rng.uniform_int(2, 3);
    s.length = rng.uniform_int(9, 16);
    s.brightness = rng.uniform_int(200, 255);
    sticks.push_back(s);
  }
  return rasterize(sticks, {side, side});
}

void criterion_synthesis(const fs::path& work) {
  constexpr int kSide = 32;
  constexpr int kPairs = 8;
  Rng rng(111);
  AugmentationConfig aug;
  aug.smooth = true;
  aug.noise = true;
  aug.brightness = true;

  std::vector<PairedBatch> batches;
  for (int i = 0; i < kPairs; ++i) {
    PairedBatch b;
    b.masks.push_back(apply(tiny_scene(rng, kSide), aug, rng));
    b.reals.push_back(apply(tiny_scene(rng, kSide), aug, rng));
    b.counts.push_back(3);
    batches.push_back(std::move(b));
  }
  const BatchStream stream = [&batches](int) { return batches; };

  SynthesisConfig cfg;
  cfg.epochs = 30;
  cfg.image_size = kSide;
  cfg.base_channels = 4;
  cfg.res_blocks = 1;
  cfg.seed = 112;
  SynthesisResult res = train_synthesis(stream, cfg);

  require(res.log.rows.size() == 30, "expected one log row per epoch");
  for (const TrainingLogRow& row : res.log.rows)
    require(std::isfinite(row.g_loss) && std::isfinite(row.d_loss) &&
                std::isfinite(row.cycle_loss),
            "non-finite loss at epoch " + std::to_string(row.epoch));
  require(res.log.rows.back().cycle_loss < res.log.rows.front().cycle_loss,
          "final cycle loss " +
              std::to_string(res.log.rows.back().cycle_loss) +
              " not below first epoch " +
              std::to_string(res.log.rows.front().cycle_loss));

  // Checkpoint round trip must synthesize bit-identically.
  const GrayImage& probe = batches.front().masks.front();
  const GrayImage before = synthesize(res.gen_m2i, probe);
  const fs::path ckpt = work / "gen_m2i.ckpt";
  save_generator(ckpt, res.gen_m2i, cfg.seed, cfg.epochs);
  GeneratorModel reloaded = load_generator(ckpt);
  const GrayImage after = synthesize(reloaded, probe);
  require(before.pixels == after.pixels,
          "synthesis output changed across a checkpoint round trip");
}

void criterion_segmentation() {
  constexpr int kSide = 32;
  constexpr int kPairs = 8;
  constexpr int kMaxSteps = 200;
  Rng rng(222);

  std::vector<MaskImage> masks;
  std::vector<GrayImage> fakes;
  for (int i = 0; i < kPairs; ++i) {
    MaskImage m = tiny_scene(rng, kSide);
    GrayImage fake(kSide, kSide);
    for (std::size_t j = 0; j < m.pixels.size(); ++j)
      fake.pixels[j] = m.pixels[j] ? 230 : 25;
    masks.push_back(std::move(m));
    fakes.push_back(std::move(fake));
  }

  SegmentationConfig cfg;
  cfg.epochs = kMaxSteps / kPairs;  // 25 epochs x 8 pairs = 200 steps
  cfg.input_size = kSide;
  cfg.base_channels = 8;
  cfg.learning_rate = 1e-2;
  cfg.seed = 223;
  const SegmentationResult res = train_segmentation(fakes, masks, cfg);

  require(res.log.rows.size() == static_cast<std::size_t>(cfg.epochs),
          "expected one log row per epoch");
  const double mean_dice = 1.0 - res.log.rows.back().dice_loss;
  require(mean_dice >= 0.9,
          "mean training Dice " + std::to_string(mean_dice) +
              " below 0.9 after " + std::to_string(kMaxSteps) + " steps");
}

// ---------------------------------------------------------------------------
// Criterion 10: the full eight-experiment grid, run twice.
// ---------------------------------------------------------------------------
void criterion_grid(const fs::path& work) {
  DemoDatasetSpec spec;
  spec.n_reals = 8;
  spec.patch_size = 48;
  spec.n_frames = 2;
  spec.seed = 4242;
  const fs::path data = work / "data";
  write_demo_dataset(data, spec);

  ExperimentConfig base;
  base.scale = Scale::kToy;
  base.seed = 777;
  base.dataset_dir = data;
  base.n_synthetic_pairs = 4;
  base.count_dist = {4, 10};
  base.synth.epochs = 2;
  base.synth.image_size = 48;
  base.synth.base_channels = 4;
  base.synth.res_blocks = 1;
  base.seg.epochs = 4;
  base.seg.input_size = 48;
  base.seg.base_channels = 4;

  const DiceReport first = run_grid(base, work / "run_a");
  require(first.rows.size() == 8, "expected 8 grid rows, got " +
                                      std::to_string(first.rows.size()));
  const std::vector<std::string> expected_ids = {
      "micro_none",
      "micro_smooth",
      "micro_smooth_noise",
      "micro_smooth_noise_bright",
      "macro_none",
      "macro_smooth",
      "macro_smooth_noise",
      "macro_smooth_noise_bright"};
  for (std::size_t i = 0; i < expected_ids.size(); ++i)
    require(first.rows[i].experiment_id == expected_ids[i],
            "row " + std::to_string(i) + " is " +
                first.rows[i].experiment_id + ", expected " +
                expected_ids[i]);
  for (const DiceReportRow& row : first.rows) {
    require(row.widths == kReportWidths, "row widths are not 1..5");
    require(row.mean_dice.size() == 5, "expected 5 width columns");
    for (const double d : row.mean_dice)
      require(std::isfinite(d) && d >= 0.0 && d <= 1.0,
              "Dice value outside [0, 1] in " + row.experiment_id);
  }

  const DiceReport second = run_grid(base, work / "run_b");
  require(second.rows.size() == 8, "second grid run lost rows");
  require(read_file(work / "run_a" / "report.csv") ==
              read_file(work / "run_b" / "report.csv"),
          "report.csv is not byte-reproducible under a fixed seed");
}

// ---------------------------------------------------------------------------

struct Gate {
  int failures = 0;

  void run(int index, const std::string& name, double budget_seconds,
           const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      body();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (error.empty() && elapsed > budget_seconds)
      error = "runtime " + std::to_string(elapsed) + "s exceeds budget " +
              std::to_string(budget_seconds) + "s";
    if (error.empty()) {
      std::printf("[PASS] criterion %02d %s (%.1fs)\n", index, name.c_str(),
                  elapsed);
    } else {
      std::printf("[FAIL] criterion %02d %s (%.1fs): %s\n", index,
                  name.c_str(), elapsed, error.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
};

}  // namespace

int main() {
  const fs::path work = fs::current_path() / "acceptance_work";
  std::error_code ec;
  fs::remove_all(work, ec);
  fs::create_directories(work);

  Gate gate;
  gate.run(1, "report CSV layout contract", 60,
           [&] { criterion_report_layout(work); });
  gate.run(2, "simulator distributions and rasterizer oracle", 120,
           [] { criterion_simulator(); });
  gate.run(3, "component counting oracles", 120, [] { criterion_counting(); });
  gate.run(4, "micro-matching pairs exact tip counts", 300,
           [] { criterion_micro_matching(); });
  gate.run(5, "evaluator Dice and dilation oracles", 120,
           [] { criterion_evaluator(); });
  gate.run(6, "quadrant split/stitch bit-exact round trip", 60,
           [] { criterion_stitcher(); });
  gate.run(7, "Dice-loss formula and gradient numerics", 60,
           [] { criterion_dice_numerics(); });
  gate.run(8, "toy synthesis training converges and checkpoints", 600,
           [&] { criterion_synthesis(work); });
  gate.run(9, "toy segmentation overfits within 200 steps", 300,
           [] { criterion_segmentation(); });
  gate.run(10, "eight-experiment grid, byte-reproducible report", 5400,
           [&] { criterion_grid(work); });

  std::printf("acceptance: %d/10 criteria passed\n", 10 - gate.failures);
  return gate.failures;
}
