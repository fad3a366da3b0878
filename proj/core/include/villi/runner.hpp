#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "villi/augment.hpp"
#include "villi/config.hpp"
#include "villi/evaluate.hpp"
#include "villi/pairing.hpp"
#include "villi/segmentation.hpp"
#include "villi/simulator.hpp"
#include "villi/synthesis.hpp"

namespace villi {

inline constexpr char kSoftwareVersion[] = "0.1.0";

enum class Scale { kPaper, kToy };

std::string to_string(Scale s);
Scale parse_scale(const std::string& s);

// Toy-scale caps: the whole eight-experiment grid must run on one desktop
// CPU core in well under the acceptance budget.
inline constexpr int kToyMaxImageSize = 64;
inline constexpr int kToyMaxEpochs = 30;
inline constexpr int kToyMaxSyntheticPairs = 64;

struct ExperimentConfig {
  std::string experiment_id = "exp";
  MatchingMode matching = MatchingMode::kMacro;
  AugmentationConfig aug;
  SynthesisConfig synth;
  SegmentationConfig seg;
  CountDistribution count_dist;
  /// Expects reals/*.png, counts.csv, frames/*.png, annotations/*.png.
  std::filesystem::path dataset_dir;
  std::filesystem::path out_dir;
  int n_synthetic_pairs = 16;
  std::uint64_t seed = 0;
  /// Defaults to paper scale so the nested synth/seg defaults validate.
  Scale scale = Scale::kPaper;

  void validate() const;

  /// Canonical config text. Covers every field that affects results;
  /// out_dir is excluded (it changes where artifacts land, not what they
  /// contain), so the hash identifies the computation.
  Config to_config() const;
  static ExperimentConfig from_config(const Config& cfg);
  std::uint64_t config_hash() const { return to_config().hash(); }
};

struct RunRecord {
  std::string experiment_id;
  std::uint64_t config_hash = 0;
  bool failed = false;
  std::string error;
  /// Artifact paths, in creation order; all must exist when the record is
  /// written.
  std::vector<std::filesystem::path> artifacts;
  TrainingLog synth_log;
  SegmentationLog seg_log;
  DiceReportRow report_row;
  double wall_seconds = 0.0;
  std::string software_version = kSoftwareVersion;

  /// Serializes to JSON; throws if any referenced artifact is missing.
  void write_json(const std::filesystem::path& path) const;
};

/// Per-epoch batch source over a dataset directory (reals/*.png, plus
/// counts.csv in micro mode). Real patches are loaded once; each epoch
/// pairs them with freshly simulated masks, seeded by the epoch index.
BatchStream make_dataset_stream(const std::filesystem::path& dataset_dir,
                                MatchingMode matching,
                                const AugmentationConfig& aug,
                                const CountDistribution& dist,
                                std::uint64_t pairing_seed);

/// Runs the full pipeline for one configuration: pairing -> synthesis
/// training -> synthetic pair generation -> segmentation training -> video
/// inference -> evaluation. Stage seeds are derived from cfg.seed by stage
/// name. Stage failures are captured in the returned record.
RunRecord run_experiment(const ExperimentConfig& cfg);

/// The eight canonical experiments: {micro, macro} x the four cumulative
/// augmentation designs, each seeded from base.seed by experiment id.
/// Writes out_dir/report.csv plus per-experiment artifact directories.
/// Per-experiment failures are recorded and the grid continues.
DiceReport run_grid(const ExperimentConfig& base,
                    const std::filesystem::path& out_dir);

/// Parsed VILLI_SEED environment variable, if set (rejects garbage).
std::optional<std::uint64_t> seed_from_env();

}  // namespace villi
