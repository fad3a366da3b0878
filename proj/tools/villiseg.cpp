// Command line front end for the segmentation-by-synthesis pipeline. Each
// subcommand is a thin file-I/O wrapper over one library stage; all
// randomness flows from the --seed options (or VILLI_SEED for run-grid).

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "villi/augment.hpp"
#include "villi/counting.hpp"
#include "villi/demo.hpp"
#include "villi/evaluate.hpp"
#include "villi/pairing.hpp"
#include "villi/png_io.hpp"
#include "villi/runner.hpp"
#include "villi/segmentation.hpp"
#include "villi/simulator.hpp"
#include "villi/stitcher.hpp"
#include "villi/synthesis.hpp"

namespace fs = std::filesystem;
using namespace villi;

namespace {

AugmentationConfig aug_from_flags(bool smooth, bool noise, bool brightness) {
  AugmentationConfig cfg;
  cfg.smooth = smooth;
  cfg.noise = noise;
  cfg.brightness = brightness;
  cfg.validate();
  return cfg;
}

void add_aug_flags(CLI::App* cmd, bool& smooth, bool& noise,
                   bool& brightness) {
  cmd->add_flag("--smooth", smooth, "5x5 Gaussian smoothing");
  cmd->add_flag("--noise", noise, "additive Gaussian noise (requires --smooth)");
  cmd->add_flag("--brightness", brightness,
                "per-object brightness (requires --smooth --noise)");
}

/// "fixed:N" -> N, "macro" -> nullopt.
std::optional<int> parse_count_mode(const std::string& mode) {
  if (mode == "macro") return std::nullopt;
  if (mode.rfind("fixed:", 0) == 0) {
    const std::string n = mode.substr(6);
    try {
      std::size_t used = 0;
      const int count = std::stoi(n, &used);
      if (used != n.size() || count < 0) throw std::invalid_argument(n);
      return count;
    } catch (const std::exception&) {
      throw CLI::ValidationError("--count-mode",
                                 "fixed count must be a non-negative integer");
    }
  }
  throw CLI::ValidationError("--count-mode", "expected 'macro' or 'fixed:N'");
}

ThresholdMethod parse_threshold_method(const std::string& method) {
  if (method == "otsu") return ThresholdMethod::otsu();
  if (method.rfind("fixed:", 0) == 0) {
    try {
      return ThresholdMethod::fixed(std::stoi(method.substr(6)));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--method", "bad fixed threshold");
    }
  }
  throw CLI::ValidationError("--method", "expected 'otsu' or 'fixed:N'");
}

std::vector<int> parse_width_list(const std::string& widths) {
  std::vector<int> out;
  std::string token;
  std::istringstream in(widths);
  while (std::getline(in, token, ',')) {
    try {
      out.push_back(std::stoi(token));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--widths", "expected comma-separated ints");
    }
  }
  if (out.empty())
    throw CLI::ValidationError("--widths", "expected at least one width");
  return out;
}

void cmd_simulate(const std::string& count_mode, int n_masks, int size,
                  std::uint64_t seed, const fs::path& out) {
  const std::optional<int> fixed = parse_count_mode(count_mode);
  Rng rng(seed);
  const ImageSize image_size{size, size};
  const CountDistribution dist;
  fs::create_directories(out);
  char name[32];
  for (int i = 0; i < n_masks; ++i) {
    const int count = fixed ? *fixed : sample_macro_count(dist, rng);
    const MaskImage mask = simulate_mask(count, image_size, rng);
    std::snprintf(name, sizeof(name), "mask_%04d", i);
    write_mask_png(out / (std::string(name) + ".png"), mask);
    write_sticks_jsonl(out / (std::string(name) + ".jsonl"), *mask.sticks);
  }
  std::cout << "wrote " << n_masks << " masks to " << out.string() << "\n";
}

void cmd_augment(const fs::path& in, const fs::path& out,
                 const AugmentationConfig& cfg, std::uint64_t seed) {
  const auto paths = list_pngs(in);
  if (paths.empty()) throw std::runtime_error("no PNGs under " + in.string());
  Rng rng(seed);
  fs::create_directories(out);
  for (const fs::path& p : paths) {
    MaskImage mask = read_mask_png(p);
    const fs::path sidecar = fs::path(p).replace_extension(".jsonl");
    if (fs::exists(sidecar)) mask.sticks = read_sticks_jsonl(sidecar);
    write_gray_png(out / p.filename(), apply(mask, cfg, rng));
    if (fs::exists(sidecar))
      fs::copy_file(sidecar, out / sidecar.filename(),
                    fs::copy_options::overwrite_existing);
  }
  std::cout << "augmented " << paths.size() << " masks into " << out.string()
            << "\n";
}

void cmd_count(const fs::path& in, const std::string& method, int min_area,
               const fs::path& out) {
  const ThresholdMethod thr = parse_threshold_method(method);
  const auto paths = list_pngs(in);
  if (paths.empty()) throw std::runtime_error("no PNGs under " + in.string());
  if (!out.parent_path().empty()) fs::create_directories(out.parent_path());
  std::ofstream csv(out);
  if (!csv) throw std::runtime_error("cannot open for write: " + out.string());
  csv << "filename,count,threshold_used,min_area_used\n";
  for (const fs::path& p : paths) {
    const CountEstimate est =
        estimate_count(read_rgb_png(p), thr, min_area);
    csv << p.filename().string() << ',' << est.count << ','
        << est.threshold_used << ',' << est.min_area_used << "\n";
  }
  std::cout << "wrote " << out.string() << "\n";
}

void cmd_build_dataset(const fs::path& reals_dir, const std::string& mode_name,
                       const fs::path& counts_csv,
                       const AugmentationConfig& aug, int n_batches,
                       std::uint64_t seed, const fs::path& out) {
  const MatchingMode mode = parse_matching_mode(mode_name);
  const auto real_paths = list_pngs(reals_dir);
  if (real_paths.empty())
    throw std::runtime_error("no PNGs under " + reals_dir.string());
  std::vector<GrayImage> reals;
  for (const fs::path& p : real_paths) reals.push_back(read_gray_png(p));

  std::optional<std::vector<int>> counts;
  if (mode == MatchingMode::kMicro) {
    if (counts_csv.empty())
      throw std::runtime_error("micro mode requires --counts");
    const auto by_name = read_counts_csv(counts_csv);
    counts.emplace();
    for (const fs::path& p : real_paths) {
      const auto it = by_name.find(p.filename().string());
      if (it == by_name.end())
        throw std::runtime_error("counts file has no row for " +
                                 p.filename().string());
      counts->push_back(it->second);
    }
  }

  fs::create_directories(out / "reals");
  fs::create_directories(out / "masks_clean");
  fs::create_directories(out / "masks_aug");
  std::ofstream manifest(out / "manifest.csv");
  if (!manifest)
    throw std::runtime_error("cannot open for write: " +
                             (out / "manifest.csv").string());
  manifest << "pair_index,count,seed\n";

  const CountDistribution dist;
  char name[32];
  for (int b = 0; b < n_batches; ++b) {
    const std::uint64_t batch_seed =
        derive_seed(seed, "batch_" + std::to_string(b));
    Rng rng(batch_seed);
    std::optional<std::span<const int>> estimates;
    if (counts) estimates = std::span<const int>(*counts);
    const std::vector<DatasetItem> items =
        build_items(reals, mode, estimates, dist, aug, rng);
    for (std::size_t i = 0; i < items.size(); ++i) {
      const long index = b * static_cast<long>(items.size()) + i;
      std::snprintf(name, sizeof(name), "pair_%05ld.png", index);
      write_gray_png(out / "reals" / name, items[i].real);
      write_mask_png(out / "masks_clean" / name, items[i].clean_mask);
      write_gray_png(out / "masks_aug" / name, items[i].aug_mask);
      manifest << index << ',' << items[i].count << ',' << batch_seed << "\n";
    }
  }
  std::cout << "wrote " << n_batches << " batch(es) to " << out.string()
            << "\n";
}

void cmd_train_synth(const fs::path& dataset, const std::string& mode_name,
                     const AugmentationConfig& aug, SynthesisConfig cfg,
                     const fs::path& out) {
  const MatchingMode mode = parse_matching_mode(mode_name);
  const BatchStream stream =
      make_dataset_stream(dataset, mode, aug, CountDistribution{},
                          derive_seed(cfg.seed, "pairing"));
  cfg.checkpoint_dir = out / "ckpt";
  try {
    SynthesisResult result = train_synthesis(stream, cfg);
    save_generator(out / "gen_m2i.ckpt", result.gen_m2i, cfg.seed,
                   cfg.epochs - 1);
    save_generator(out / "gen_i2m.ckpt", result.gen_i2m, cfg.seed,
                   cfg.epochs - 1);
    result.log.write_csv(out / "training_log.csv");
    std::cout << "trained " << cfg.epochs << " epochs; final cycle loss "
              << result.log.rows.back().cycle_loss << "\n";
  } catch (const SynthesisDivergedError& e) {
    SynthesisResult& last = *e.last_good();
    save_generator(out / "gen_m2i.ckpt", last.gen_m2i, cfg.seed,
                   e.failed_epoch() - 1);
    save_generator(out / "gen_i2m.ckpt", last.gen_i2m, cfg.seed,
                   e.failed_epoch() - 1);
    last.log.write_csv(out / "training_log.csv");
    throw std::runtime_error(std::string(e.what()) +
                             "; last good models saved to " + out.string());
  }
}

void cmd_synthesize(const fs::path& ckpt, const fs::path& masks,
                    const fs::path& out) {
  GeneratorModel gen = load_generator(ckpt);
  const auto paths = list_pngs(masks);
  if (paths.empty()) throw std::runtime_error("no PNGs under " + masks.string());
  fs::create_directories(out);
  for (const fs::path& p : paths)
    write_gray_png(out / p.filename(), synthesize(gen, read_gray_png(p)));
  std::cout << "synthesized " << paths.size() << " images into "
            << out.string() << "\n";
}

void cmd_train_seg(const fs::path& fakes_dir, const fs::path& masks_dir,
                   SegmentationConfig cfg, const fs::path& out) {
  const auto fake_paths = list_pngs(fakes_dir);
  const auto mask_paths = list_pngs(masks_dir);
  if (fake_paths.empty())
    throw std::runtime_error("no PNGs under " + fakes_dir.string());
  if (fake_paths.size() != mask_paths.size())
    throw std::runtime_error("fakes/masks directory size mismatch");
  std::vector<GrayImage> fakes;
  std::vector<MaskImage> masks;
  for (const fs::path& p : fake_paths) fakes.push_back(read_gray_png(p));
  for (const fs::path& p : mask_paths) masks.push_back(read_mask_png(p));

  cfg.checkpoint_dir = out / "ckpt";
  try {
    SegmentationResult result = train_segmentation(fakes, masks, cfg);
    save_segmentation(out / "unet.ckpt", result.model, cfg.seed,
                      cfg.epochs - 1);
    result.log.write_csv(out / "training_log.csv");
    std::cout << "trained " << cfg.epochs << " epochs; final dice loss "
              << result.log.rows.back().dice_loss << "\n";
  } catch (const SegmentationDivergedError& e) {
    SegmentationResult& last = *e.last_good();
    save_segmentation(out / "unet.ckpt", last.model, cfg.seed,
                      e.failed_epoch() - 1);
    last.log.write_csv(out / "training_log.csv");
    throw std::runtime_error(std::string(e.what()) +
                             "; last good model saved to " + out.string());
  }
}

void cmd_predict(const fs::path& ckpt, const fs::path& in,
                 const fs::path& out) {
  SegmentationModel model = load_segmentation(ckpt);
  const auto paths = list_pngs(in);
  if (paths.empty()) throw std::runtime_error("no PNGs under " + in.string());
  fs::create_directories(out);
  for (const fs::path& p : paths)
    write_gray_png(out / p.filename(),
                   prob_to_gray(predict(model, read_gray_png(p))));
  std::cout << "wrote " << paths.size() << " probability maps to "
            << out.string() << "\n";
}

void cmd_segment_video(const fs::path& ckpt, const fs::path& frames,
                       double threshold, const fs::path& out) {
  SegmentationModel model = load_segmentation(ckpt);
  const auto paths = list_pngs(frames);
  if (paths.empty())
    throw std::runtime_error("no PNGs under " + frames.string());
  fs::create_directories(out);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Frame frame{read_gray_png(paths[i]), static_cast<int>(i)};
    write_mask_png(out / (std::to_string(i) + "_pred.png"),
                   segment_frame(model, frame, threshold));
  }
  std::cout << "segmented " << paths.size() << " frames into " << out.string()
            << "\n";
}

void cmd_evaluate(const fs::path& preds_dir, const fs::path& anns_dir,
                  const std::string& widths_arg, const fs::path& out,
                  const std::string& experiment_id, const std::string& matching,
                  bool smooth, bool noise, bool brightness) {
  const std::vector<int> widths = parse_width_list(widths_arg);
  const auto pred_paths = list_pngs(preds_dir);
  const auto ann_paths = list_pngs(anns_dir);
  if (pred_paths.empty())
    throw std::runtime_error("no PNGs under " + preds_dir.string());
  if (pred_paths.size() != ann_paths.size())
    throw std::runtime_error("preds/annotations count mismatch");

  std::vector<MaskImage> preds;
  std::vector<CenterlineAnnotation> anns;
  for (const fs::path& p : pred_paths) preds.push_back(read_mask_png(p));
  for (std::size_t i = 0; i < ann_paths.size(); ++i)
    anns.push_back({read_mask_png(ann_paths[i]), static_cast<int>(i)});

  DiceReportRow row = evaluate(preds, anns, widths);
  row.experiment_id = experiment_id;
  row.matching = matching;
  row.smooth = smooth;
  row.noise = noise;
  row.brightness = brightness;
  DiceReport report;
  report.rows.push_back(std::move(row));
  report.write_csv(out);
  std::cout << "wrote " << out.string() << "\n";
}

void cmd_run_grid(const fs::path& config_path, const std::string& scale,
                  const fs::path& out) {
  ExperimentConfig base = ExperimentConfig::from_config(Config::load(config_path));
  if (!scale.empty()) base.scale = parse_scale(scale);
  if (base.dataset_dir.is_relative())
    base.dataset_dir = config_path.parent_path() / base.dataset_dir;
  const DiceReport report = run_grid(base, out);
  std::cout << report.rows.size()
            << "/8 experiments succeeded; report at "
            << (out / "report.csv").string() << "\n";
  for (const DiceReportRow& row : report.rows) {
    std::cout << "  " << row.experiment_id << ":";
    for (std::size_t i = 0; i < row.widths.size(); ++i) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), " D_w%d=%.4f", row.widths[i],
                    row.mean_dice[i]);
      std::cout << buf;
    }
    std::cout << "\n";
  }
  if (report.rows.size() < 8) throw std::runtime_error("grid had failures");
}

void cmd_demo_data(const fs::path& out, int n_reals, int patch_size,
                   int n_frames, std::uint64_t seed) {
  DemoDatasetSpec spec;
  spec.n_reals = n_reals;
  spec.patch_size = patch_size;
  spec.n_frames = n_frames;
  spec.seed = seed;
  write_demo_dataset(out, spec);
  std::cout << "wrote demo dataset to " << out.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised segmentation of stick-like sub-cellular objects "
               "by mask simulation, image synthesis, and a segmentation "
               "network"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate binary stick masks");
  std::string sim_count_mode = "macro";
  int sim_n = 1, sim_size = 128;
  std::uint64_t sim_seed = 0;
  fs::path sim_out;
  sim->add_option("--count-mode", sim_count_mode, "'macro' or 'fixed:N'");
  sim->add_option("--n-masks", sim_n, "number of masks")->check(CLI::PositiveNumber);
  sim->add_option("--size", sim_size, "square image side");
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--out", sim_out, "output directory")->required();
  sim->callback([&] { cmd_simulate(sim_count_mode, sim_n, sim_size, sim_seed, sim_out); });

  // augment
  auto* aug_cmd = app.add_subcommand("augment", "Augment binary masks");
  fs::path aug_in, aug_out;
  bool aug_s = false, aug_n = false, aug_b = false;
  std::uint64_t aug_seed = 0;
  aug_cmd->add_option("--in", aug_in, "mask directory")->required();
  aug_cmd->add_option("--out", aug_out, "output directory")->required();
  add_aug_flags(aug_cmd, aug_s, aug_n, aug_b);
  aug_cmd->add_option("--seed", aug_seed, "RNG seed");
  aug_cmd->callback([&] {
    cmd_augment(aug_in, aug_out, aug_from_flags(aug_s, aug_n, aug_b), aug_seed);
  });

  // count
  auto* cnt = app.add_subcommand("count", "Count objects via the green tip channel");
  fs::path cnt_in, cnt_out;
  std::string cnt_method = "otsu";
  int cnt_min_area = kDefaultMinArea;
  cnt->add_option("--in", cnt_in, "RGB PNG directory")->required();
  cnt->add_option("--method", cnt_method, "'otsu' or 'fixed:N'");
  cnt->add_option("--min-area", cnt_min_area, "minimum component area");
  cnt->add_option("--out", cnt_out, "counts CSV path")->required();
  cnt->callback([&] { cmd_count(cnt_in, cnt_method, cnt_min_area, cnt_out); });

  // build-dataset
  auto* bd = app.add_subcommand("build-dataset", "Materialize paired batches on disk");
  fs::path bd_reals, bd_counts, bd_out;
  std::string bd_mode = "macro";
  bool bd_s = false, bd_n = false, bd_b = false;
  int bd_batches = 1;
  std::uint64_t bd_seed = 0;
  bd->add_option("--reals", bd_reals, "real patch directory")->required();
  bd->add_option("--mode", bd_mode, "'micro' or 'macro'");
  bd->add_option("--counts", bd_counts, "counts CSV (micro mode)");
  add_aug_flags(bd, bd_s, bd_n, bd_b);
  bd->add_option("--n-batches", bd_batches, "batches to emit")->check(CLI::PositiveNumber);
  bd->add_option("--seed", bd_seed, "RNG seed");
  bd->add_option("--out", bd_out, "output directory")->required();
  bd->callback([&] {
    cmd_build_dataset(bd_reals, bd_mode, bd_counts,
                      aug_from_flags(bd_s, bd_n, bd_b), bd_batches, bd_seed,
                      bd_out);
  });

  // train-synth
  auto* ts = app.add_subcommand("train-synth", "Train the synthesis model pair");
  fs::path ts_dataset, ts_out;
  std::string ts_mode = "macro", ts_adv = "least-squares";
  bool ts_s = false, ts_n = false, ts_b = false;
  SynthesisConfig ts_cfg;
  ts->add_option("--dataset", ts_dataset, "dataset dir (reals/, counts.csv)")->required();
  ts->add_option("--mode", ts_mode, "'micro' or 'macro'");
  add_aug_flags(ts, ts_s, ts_n, ts_b);
  ts->add_option("--epochs", ts_cfg.epochs, "training epochs");
  ts->add_option("--image-size", ts_cfg.image_size, "training resolution");
  ts->add_option("--cycle-weight", ts_cfg.cycle_weight, "cycle loss weight");
  ts->add_option("--adv-loss", ts_adv, "'least-squares' or 'cross-entropy'");
  ts->add_option("--lr", ts_cfg.learning_rate, "learning rate");
  ts->add_option("--base-channels", ts_cfg.base_channels, "generator width");
  ts->add_option("--res-blocks", ts_cfg.res_blocks, "residual blocks (0 = auto)");
  ts->add_option("--seed", ts_cfg.seed, "RNG seed");
  ts->add_option("--out", ts_out, "output directory")->required();
  ts->callback([&] {
    ts_cfg.adversarial_loss = parse_adversarial_loss(ts_adv);
    cmd_train_synth(ts_dataset, ts_mode, aug_from_flags(ts_s, ts_n, ts_b),
                    ts_cfg, ts_out);
  });

  // synthesize
  auto* sy = app.add_subcommand("synthesize", "Masks to synthetic images");
  fs::path sy_ckpt, sy_masks, sy_out;
  sy->add_option("--ckpt", sy_ckpt, "mask-to-image generator checkpoint")->required();
  sy->add_option("--masks", sy_masks, "augmented mask directory")->required();
  sy->add_option("--out", sy_out, "output directory")->required();
  sy->callback([&] { cmd_synthesize(sy_ckpt, sy_masks, sy_out); });

  // train-seg
  auto* tg = app.add_subcommand("train-seg", "Train the segmentation network");
  fs::path tg_fakes, tg_masks, tg_out;
  SegmentationConfig tg_cfg;
  tg->add_option("--fakes", tg_fakes, "synthetic image directory")->required();
  tg->add_option("--masks", tg_masks, "clean mask directory")->required();
  tg->add_option("--epochs", tg_cfg.epochs, "training epochs");
  tg->add_option("--input-size", tg_cfg.input_size, "network input size");
  tg->add_option("--lr", tg_cfg.learning_rate, "learning rate");
  tg->add_option("--base-channels", tg_cfg.base_channels, "first-level width");
  tg->add_option("--width-multiplier", tg_cfg.width_multiplier, "width scale");
  tg->add_option("--seed", tg_cfg.seed, "RNG seed");
  tg->add_option("--out", tg_out, "output directory")->required();
  tg->callback([&] { cmd_train_seg(tg_fakes, tg_masks, tg_cfg, tg_out); });

  // predict
  auto* pr = app.add_subcommand("predict", "Per-patch probability maps");
  fs::path pr_ckpt, pr_in, pr_out;
  pr->add_option("--ckpt", pr_ckpt, "segmentation checkpoint")->required();
  pr->add_option("--in", pr_in, "input patch directory")->required();
  pr->add_option("--out", pr_out, "output directory")->required();
  pr->callback([&] { cmd_predict(pr_ckpt, pr_in, pr_out); });

  // segment-video
  auto* sv = app.add_subcommand("segment-video", "Segment 256x256 frames");
  fs::path sv_ckpt, sv_frames, sv_out;
  double sv_threshold = 0.5;
  sv->add_option("--ckpt", sv_ckpt, "segmentation checkpoint")->required();
  sv->add_option("--frames", sv_frames, "frame directory")->required();
  sv->add_option("--threshold", sv_threshold, "binarization threshold");
  sv->add_option("--out", sv_out, "output directory")->required();
  sv->callback([&] { cmd_segment_video(sv_ckpt, sv_frames, sv_threshold, sv_out); });

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Dice vs dilated centerlines");
  fs::path ev_preds, ev_anns, ev_out;
  std::string ev_widths = "1,2,3,4,5", ev_id = "eval", ev_matching;
  bool ev_s = false, ev_n = false, ev_b = false;
  ev->add_option("--preds", ev_preds, "prediction mask directory")->required();
  ev->add_option("--annotations", ev_anns, "centerline directory")->required();
  ev->add_option("--widths", ev_widths, "comma-separated widths");
  ev->add_option("--out", ev_out, "report CSV path")->required();
  ev->add_option("--experiment-id", ev_id, "report row label");
  ev->add_option("--matching", ev_matching, "report matching column");
  add_aug_flags(ev, ev_s, ev_n, ev_b);
  ev->callback([&] {
    cmd_evaluate(ev_preds, ev_anns, ev_widths, ev_out, ev_id, ev_matching,
                 ev_s, ev_n, ev_b);
  });

  // run-grid
  auto* rg = app.add_subcommand("run-grid", "Run the eight-experiment grid");
  fs::path rg_config, rg_out;
  std::string rg_scale;
  rg->add_option("--config", rg_config, "base experiment config")->required();
  rg->add_option("--scale", rg_scale, "'toy' or 'paper' (overrides config)");
  rg->add_option("--out", rg_out, "output directory")->required();
  rg->callback([&] { cmd_run_grid(rg_config, rg_scale, rg_out); });

  // demo-data
  auto* dd = app.add_subcommand("demo-data", "Generate a synthetic demo dataset");
  fs::path dd_out;
  int dd_reals = 16, dd_patch = 48, dd_frames = 4;
  std::uint64_t dd_seed = 0;
  dd->add_option("--out", dd_out, "output directory")->required();
  dd->add_option("--n-reals", dd_reals, "pseudo-real patches")->check(CLI::PositiveNumber);
  dd->add_option("--patch-size", dd_patch, "patch side length");
  dd->add_option("--n-frames", dd_frames, "test frames")->check(CLI::PositiveNumber);
  dd->add_option("--seed", dd_seed, "RNG seed");
  dd->callback([&] { cmd_demo_data(dd_out, dd_reals, dd_patch, dd_frames, dd_seed); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
