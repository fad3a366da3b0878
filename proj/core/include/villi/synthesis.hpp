#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "villi/errors.hpp"
#include "villi/image.hpp"
#include "villi/nn/layers.hpp"
#include "villi/pairing.hpp"

namespace villi {

enum class AdversarialLoss { kLeastSquares, kCrossEntropy };
enum class Direction { kMaskToImage, kImageToMask };

std::string to_string(Direction d);
std::string to_string(AdversarialLoss l);
AdversarialLoss parse_adversarial_loss(const std::string& s);

struct SynthesisConfig {
  int epochs = 50;
  int image_size = 256;  // both domains are resized to this during training
  double cycle_weight = 10.0;
  AdversarialLoss adversarial_loss = AdversarialLoss::kLeastSquares;
  double learning_rate = 2e-4;
  std::uint64_t seed = 0;
  int base_channels = 32;
  int res_blocks = 0;  // 0 = derive from image_size: 6 at >= 128, else 2
  /// When set, a checkpoint bundle is written after every epoch.
  std::filesystem::path checkpoint_dir;

  void validate() const;
  int resolved_res_blocks() const {
    if (res_blocks > 0) return res_blocks;
    return image_size >= 128 ? 6 : 2;
  }
};

struct GeneratorArch {
  int base_channels = 32;
  int res_blocks = 6;
};

struct DiscriminatorArch {
  int base_channels = 32;
};

/// Mask<->image translator. The network is fully convolutional; any input
/// whose sides are divisible by 4 is accepted and the output has the same
/// spatial size. An empty net acts as the identity (test stubs).
struct GeneratorModel {
  Direction direction = Direction::kMaskToImage;
  GeneratorArch arch;
  nn::Sequential net;
};

/// Patch discriminator emitting a score map (a fixed downsampling of the
/// input size); scores are raw, the loss applies its own squashing.
struct DiscriminatorModel {
  DiscriminatorArch arch;
  nn::Sequential net;
};

struct TrainingLogRow {
  int epoch = 0;  // 1-based
  double g_loss = 0.0;
  double d_loss = 0.0;
  double cycle_loss = 0.0;
  double wall_seconds = 0.0;
};

struct TrainingLog {
  std::vector<TrainingLogRow> rows;
  void write_csv(const std::filesystem::path& path) const;
};

struct SynthesisResult {
  GeneratorModel gen_m2i;
  GeneratorModel gen_i2m;
  TrainingLog log;
};

/// Called once per epoch; returns that epoch's mini-batches. Implementations
/// are expected to derive any per-epoch randomness from the epoch index so
/// training stays reproducible.
using BatchStream = std::function<std::vector<PairedBatch>(int epoch)>;

class SynthesisDivergedError : public TrainingDivergedError {
 public:
  SynthesisDivergedError(const std::string& what, int failed_epoch,
                         std::shared_ptr<SynthesisResult> last_good)
      : TrainingDivergedError(what, failed_epoch),
        last_good_(std::move(last_good)) {}

  /// Models as of the last completed epoch (initialization state when the
  /// first epoch diverged).
  const std::shared_ptr<SynthesisResult>& last_good() const {
    return last_good_;
  }

 private:
  std::shared_ptr<SynthesisResult> last_good_;
};

GeneratorModel make_generator(Direction direction, const GeneratorArch& arch,
                              std::uint64_t seed);
DiscriminatorModel make_discriminator(const DiscriminatorArch& arch,
                                      std::uint64_t seed);

/// Full cycle-consistent adversarial training over both directions.
SynthesisResult train_synthesis(const BatchStream& stream,
                                const SynthesisConfig& cfg);

/// Runs a generator on an image regardless of direction ([0,255] in and out).
GrayImage translate(GeneratorModel& gen, const GrayImage& img);

/// Mask -> image production path; rejects generators of the wrong direction.
GrayImage synthesize(GeneratorModel& gen, const GrayImage& mask);

/// Mean absolute round-trip error |img - g_ba(g_ab(img))| in [0,255] units.
/// The two generators must have complementary directions.
double cycle_error(GeneratorModel& g_ab, GeneratorModel& g_ba,
                   const GrayImage& img);

void save_generator(const std::filesystem::path& path, GeneratorModel& model,
                    std::uint64_t seed, int epoch);
GeneratorModel load_generator(const std::filesystem::path& path);

}  // namespace villi
