#include "villi/runner.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "villi/counting.hpp"
#include "villi/png_io.hpp"
#include "villi/stitcher.hpp"

namespace villi {

namespace fs = std::filesystem;

std::string to_string(Scale s) {
  return s == Scale::kPaper ? "paper" : "toy";
}

Scale parse_scale(const std::string& s) {
  if (s == "paper") return Scale::kPaper;
  if (s == "toy") return Scale::kToy;
  throw std::invalid_argument("unknown scale: " + s);
}

void ExperimentConfig::validate() const {
  aug.validate();
  synth.validate();
  seg.validate();
  if (experiment_id.empty())
    throw std::invalid_argument("ExperimentConfig: empty experiment_id");
  if (count_dist.low > count_dist.high || count_dist.low < 0)
    throw std::invalid_argument("ExperimentConfig: bad count distribution");
  if (n_synthetic_pairs < 1)
    throw std::invalid_argument(
        "ExperimentConfig: n_synthetic_pairs must be >= 1");
  if (synth.image_size < kMinSimulatedImageSide)
    throw std::invalid_argument(
        "ExperimentConfig: synthesis image size cannot hold a full stick");
  if (scale == Scale::kToy) {
    if (synth.image_size > kToyMaxImageSize ||
        seg.input_size > kToyMaxImageSize)
      throw std::invalid_argument("ExperimentConfig: toy image size cap is " +
                                  std::to_string(kToyMaxImageSize));
    if (synth.epochs > kToyMaxEpochs || seg.epochs > kToyMaxEpochs)
      throw std::invalid_argument("ExperimentConfig: toy epoch cap is " +
                                  std::to_string(kToyMaxEpochs));
    if (n_synthetic_pairs > kToyMaxSyntheticPairs)
      throw std::invalid_argument(
          "ExperimentConfig: toy synthetic-pair cap is " +
          std::to_string(kToyMaxSyntheticPairs));
  }
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_hash(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

Config ExperimentConfig::to_config() const {
  Config c;
  c.set("experiment", "id", experiment_id);
  c.set("experiment", "matching", to_string(matching));
  c.set("experiment", "scale", to_string(scale));
  c.set("experiment", "n_synthetic_pairs", std::to_string(n_synthetic_pairs));
  c.set("experiment", "seed", std::to_string(seed));
  c.set("experiment", "dataset_dir", dataset_dir.generic_string());
  c.set("experiment", "count_low", std::to_string(count_dist.low));
  c.set("experiment", "count_high", std::to_string(count_dist.high));

  c.set("augment", "smooth", aug.smooth ? "true" : "false");
  c.set("augment", "noise", aug.noise ? "true" : "false");
  c.set("augment", "brightness", aug.brightness ? "true" : "false");
  c.set("augment", "smooth_kernel", std::to_string(aug.smooth_kernel));
  c.set("augment", "smooth_sigma", fmt_double(aug.smooth_sigma));
  c.set("augment", "noise_sigma", fmt_double(aug.noise_sigma));

  c.set("synthesis", "epochs", std::to_string(synth.epochs));
  c.set("synthesis", "image_size", std::to_string(synth.image_size));
  c.set("synthesis", "cycle_weight", fmt_double(synth.cycle_weight));
  c.set("synthesis", "adversarial_loss", to_string(synth.adversarial_loss));
  c.set("synthesis", "learning_rate", fmt_double(synth.learning_rate));
  c.set("synthesis", "base_channels", std::to_string(synth.base_channels));
  c.set("synthesis", "res_blocks", std::to_string(synth.res_blocks));

  c.set("segmentation", "epochs", std::to_string(seg.epochs));
  c.set("segmentation", "input_size", std::to_string(seg.input_size));
  c.set("segmentation", "learning_rate", fmt_double(seg.learning_rate));
  c.set("segmentation", "binarize_threshold",
        fmt_double(seg.binarize_threshold));
  c.set("segmentation", "dice_epsilon", fmt_double(seg.dice_epsilon));
  c.set("segmentation", "base_channels", std::to_string(seg.base_channels));
  c.set("segmentation", "width_multiplier", fmt_double(seg.width_multiplier));
  return c;
}

// Every key is optional; absent keys keep the field's default, so partial
// config files are usable from the command line. Typed getters still reject
// malformed values for keys that are present.
ExperimentConfig ExperimentConfig::from_config(const Config& c) {
  ExperimentConfig e;
  auto opt = [&c](const char* s, const char* k, auto read, auto& field) {
    if (c.find(s, k)) field = read(s, k);
  };
  auto str = [&c](const char* s, const char* k) { return c.get(s, k); };
  auto num = [&c](const char* s, const char* k) { return c.get_int(s, k); };
  auto dbl = [&c](const char* s, const char* k) { return c.get_double(s, k); };
  auto flag = [&c](const char* s, const char* k) { return c.get_bool(s, k); };

  opt("experiment", "id", str, e.experiment_id);
  if (c.find("experiment", "matching"))
    e.matching = parse_matching_mode(c.get("experiment", "matching"));
  if (c.find("experiment", "scale"))
    e.scale = parse_scale(c.get("experiment", "scale"));
  opt("experiment", "n_synthetic_pairs", num, e.n_synthetic_pairs);
  if (c.find("experiment", "seed")) e.seed = c.get_u64("experiment", "seed");
  if (c.find("experiment", "dataset_dir"))
    e.dataset_dir = c.get("experiment", "dataset_dir");
  opt("experiment", "count_low", num, e.count_dist.low);
  opt("experiment", "count_high", num, e.count_dist.high);

  opt("augment", "smooth", flag, e.aug.smooth);
  opt("augment", "noise", flag, e.aug.noise);
  opt("augment", "brightness", flag, e.aug.brightness);
  opt("augment", "smooth_kernel", num, e.aug.smooth_kernel);
  opt("augment", "smooth_sigma", dbl, e.aug.smooth_sigma);
  opt("augment", "noise_sigma", dbl, e.aug.noise_sigma);

  opt("synthesis", "epochs", num, e.synth.epochs);
  opt("synthesis", "image_size", num, e.synth.image_size);
  opt("synthesis", "cycle_weight", dbl, e.synth.cycle_weight);
  if (c.find("synthesis", "adversarial_loss"))
    e.synth.adversarial_loss =
        parse_adversarial_loss(c.get("synthesis", "adversarial_loss"));
  opt("synthesis", "learning_rate", dbl, e.synth.learning_rate);
  opt("synthesis", "base_channels", num, e.synth.base_channels);
  opt("synthesis", "res_blocks", num, e.synth.res_blocks);

  opt("segmentation", "epochs", num, e.seg.epochs);
  opt("segmentation", "input_size", num, e.seg.input_size);
  opt("segmentation", "learning_rate", dbl, e.seg.learning_rate);
  opt("segmentation", "binarize_threshold", dbl, e.seg.binarize_threshold);
  opt("segmentation", "dice_epsilon", dbl, e.seg.dice_epsilon);
  opt("segmentation", "base_channels", num, e.seg.base_channels);
  opt("segmentation", "width_multiplier", dbl, e.seg.width_multiplier);
  return e;
}

void RunRecord::write_json(const std::filesystem::path& path) const {
  for (const fs::path& artifact : artifacts)
    if (!fs::exists(artifact))
      throw std::runtime_error("RunRecord: missing artifact " +
                               artifact.string());

  nlohmann::json j;
  j["experiment_id"] = experiment_id;
  j["config_hash"] = fmt_hash(config_hash);
  j["failed"] = failed;
  j["error"] = error;
  j["software_version"] = software_version;
  j["wall_seconds"] = wall_seconds;
  j["artifacts"] = nlohmann::json::array();
  for (const fs::path& artifact : artifacts)
    j["artifacts"].push_back(artifact.generic_string());

  nlohmann::json synth = nlohmann::json::array();
  for (const TrainingLogRow& r : synth_log.rows)
    synth.push_back({{"epoch", r.epoch},
                     {"g_loss", r.g_loss},
                     {"d_loss", r.d_loss},
                     {"cycle_loss", r.cycle_loss},
                     {"wall_seconds", r.wall_seconds}});
  j["synthesis_log"] = std::move(synth);

  nlohmann::json seg = nlohmann::json::array();
  for (const SegmentationLogRow& r : seg_log.rows)
    seg.push_back({{"epoch", r.epoch},
                   {"dice_loss", r.dice_loss},
                   {"wall_seconds", r.wall_seconds}});
  j["segmentation_log"] = std::move(seg);

  j["dice"] = {{"widths", report_row.widths},
               {"mean", report_row.mean_dice},
               {"per_frame", report_row.per_frame}};

  if (!path.parent_path().empty())
    fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path.string());
  out << j.dump(2) << "\n";
}

BatchStream make_dataset_stream(const std::filesystem::path& dataset_dir,
                                MatchingMode matching,
                                const AugmentationConfig& aug,
                                const CountDistribution& dist,
                                std::uint64_t pairing_seed) {
  const std::vector<fs::path> real_paths = list_pngs(dataset_dir / "reals");
  if (real_paths.empty())
    throw std::runtime_error("no real patches under " +
                             (dataset_dir / "reals").string());
  std::vector<GrayImage> reals;
  reals.reserve(real_paths.size());
  for (const fs::path& p : real_paths) reals.push_back(read_gray_png(p));

  std::optional<std::vector<int>> counts;
  if (matching == MatchingMode::kMicro) {
    const auto by_name = read_counts_csv(dataset_dir / "counts.csv");
    counts.emplace();
    for (const fs::path& p : real_paths) {
      const auto it = by_name.find(p.filename().string());
      if (it == by_name.end())
        throw std::runtime_error("counts.csv has no row for " +
                                 p.filename().string());
      counts->push_back(it->second);
    }
  }

  return [reals = std::move(reals), counts = std::move(counts), matching, dist,
          aug, pairing_seed](int epoch) {
    Rng rng(derive_seed(pairing_seed, "epoch_" + std::to_string(epoch)));
    std::optional<std::span<const int>> estimates;
    if (counts) estimates = std::span<const int>(*counts);
    std::vector<PairedBatch> batches;
    batches.push_back(build_batch(reals, matching, estimates, dist, aug, rng));
    return batches;
  };
}

RunRecord run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  RunRecord rec;
  rec.experiment_id = cfg.experiment_id;
  rec.config_hash = cfg.config_hash();
  const auto t0 = std::chrono::steady_clock::now();

  fs::create_directories(cfg.out_dir);
  const fs::path config_path = cfg.out_dir / "config.cfg";
  cfg.to_config().save(config_path);
  rec.artifacts.push_back(config_path);

  try {
    const BatchStream stream =
        make_dataset_stream(cfg.dataset_dir, cfg.matching, cfg.aug,
                            cfg.count_dist, derive_seed(cfg.seed, "pairing"));

    // --- synthesis training ---
    SynthesisConfig synth = cfg.synth;
    synth.seed = derive_seed(cfg.seed, "synthesis");
    synth.checkpoint_dir = cfg.out_dir / "ckpt_synth";
    SynthesisResult syn = train_synthesis(stream, synth);
    rec.synth_log = syn.log;
    const fs::path synth_log_path = cfg.out_dir / "synth_log.csv";
    syn.log.write_csv(synth_log_path);
    rec.artifacts.push_back(synth_log_path);
    const fs::path gen_path = cfg.out_dir / "gen_m2i.ckpt";
    save_generator(gen_path, syn.gen_m2i, synth.seed, synth.epochs - 1);
    rec.artifacts.push_back(gen_path);

    // --- synthetic training pairs for segmentation ---
    Rng pair_rng(derive_seed(cfg.seed, "synthetic_pairs"));
    const ImageSize mask_size{synth.image_size, synth.image_size};
    std::vector<GrayImage> fakes;
    std::vector<MaskImage> cleans;
    fakes.reserve(cfg.n_synthetic_pairs);
    cleans.reserve(cfg.n_synthetic_pairs);
    for (int i = 0; i < cfg.n_synthetic_pairs; ++i) {
      const int count = sample_macro_count(cfg.count_dist, pair_rng);
      MaskImage mask = simulate_mask(count, mask_size, pair_rng);
      const GrayImage aug_mask = apply(mask, cfg.aug, pair_rng);
      fakes.push_back(synthesize(syn.gen_m2i, aug_mask));
      cleans.push_back(std::move(mask));
    }

    // --- segmentation training ---
    SegmentationConfig seg = cfg.seg;
    seg.seed = derive_seed(cfg.seed, "segmentation");
    seg.checkpoint_dir = cfg.out_dir / "ckpt_seg";
    SegmentationResult sr = train_segmentation(fakes, cleans, seg);
    rec.seg_log = sr.log;
    const fs::path seg_log_path = cfg.out_dir / "seg_log.csv";
    sr.log.write_csv(seg_log_path);
    rec.artifacts.push_back(seg_log_path);
    const fs::path unet_path = cfg.out_dir / "unet.ckpt";
    save_segmentation(unet_path, sr.model, seg.seed, seg.epochs - 1);
    rec.artifacts.push_back(unet_path);

    // --- video inference ---
    const std::vector<fs::path> frame_paths =
        list_pngs(cfg.dataset_dir / "frames");
    if (frame_paths.empty())
      throw std::runtime_error("no frames under " +
                               (cfg.dataset_dir / "frames").string());
    fs::create_directories(cfg.out_dir / "preds");
    std::vector<MaskImage> preds;
    preds.reserve(frame_paths.size());
    for (std::size_t i = 0; i < frame_paths.size(); ++i) {
      Frame frame{read_gray_png(frame_paths[i]), static_cast<int>(i)};
      preds.push_back(segment_frame(sr.model, frame, seg.binarize_threshold));
      const fs::path pred_path =
          cfg.out_dir / "preds" / (std::to_string(i) + "_pred.png");
      write_mask_png(pred_path, preds.back());
      rec.artifacts.push_back(pred_path);
    }

    // --- evaluation ---
    const std::vector<fs::path> ann_paths =
        list_pngs(cfg.dataset_dir / "annotations");
    if (ann_paths.size() != frame_paths.size())
      throw std::runtime_error("frames/annotations count mismatch");
    std::vector<CenterlineAnnotation> anns;
    anns.reserve(ann_paths.size());
    for (std::size_t i = 0; i < ann_paths.size(); ++i)
      anns.push_back({read_mask_png(ann_paths[i]), static_cast<int>(i)});

    DiceReportRow row = evaluate(preds, anns, kReportWidths);
    row.experiment_id = cfg.experiment_id;
    row.matching = to_string(cfg.matching);
    row.smooth = cfg.aug.smooth;
    row.noise = cfg.aug.noise;
    row.brightness = cfg.aug.brightness;
    rec.report_row = std::move(row);
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
  }

  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  rec.write_json(cfg.out_dir / "record.json");
  return rec;
}

DiceReport run_grid(const ExperimentConfig& base,
                    const std::filesystem::path& out_dir) {
  struct Design {
    const char* suffix;
    bool smooth, noise, brightness;
  };
  static constexpr Design kDesigns[] = {
      {"none", false, false, false},
      {"smooth", true, false, false},
      {"smooth_noise", true, true, false},
      {"smooth_noise_bright", true, true, true},
  };

  std::uint64_t base_seed = base.seed;
  if (const auto env = seed_from_env()) base_seed = *env;

  DiceReport report;
  for (const MatchingMode mode : {MatchingMode::kMicro, MatchingMode::kMacro})
    for (const Design& design : kDesigns) {
      ExperimentConfig cfg = base;
      cfg.experiment_id = to_string(mode) + "_" + design.suffix;
      cfg.matching = mode;
      cfg.aug.smooth = design.smooth;
      cfg.aug.noise = design.noise;
      cfg.aug.brightness = design.brightness;
      cfg.seed = derive_seed(base_seed, cfg.experiment_id);
      cfg.out_dir = out_dir / cfg.experiment_id;
      const RunRecord rec = run_experiment(cfg);
      if (!rec.failed) report.rows.push_back(rec.report_row);
    }

  report.write_csv(out_dir / "report.csv");
  return report;
}

std::optional<std::uint64_t> seed_from_env() {
  const char* v = std::getenv("VILLI_SEED");
  if (!v || !*v) return std::nullopt;
  const std::string s(v);
  // stoull accepts a leading '-' and wraps, so screen to digits first.
  try {
    if (s.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument(s);
    return static_cast<std::uint64_t>(std::stoull(s));
  } catch (const std::exception&) {
    throw std::invalid_argument("VILLI_SEED must be an unsigned integer, got: " +
                                s);
  }
}

}  // namespace villi
