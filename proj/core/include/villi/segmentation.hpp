#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "villi/errors.hpp"
#include "villi/image.hpp"
#include "villi/nn/layers.hpp"

namespace villi {

struct SegmentationConfig {
  int epochs = 10;
  int input_size = 256;  // patches are resized to this before the network
  double learning_rate = 1e-3;
  double binarize_threshold = 0.5;
  double dice_epsilon = 1e-6;
  std::uint64_t seed = 0;
  int base_channels = 16;
  double width_multiplier = 1.0;  // scales all channel widths (toy runs)
  /// When set, a checkpoint is written after every epoch.
  std::filesystem::path checkpoint_dir;

  void validate() const;
  int effective_channels() const;
};

/// Four-level contracting/expanding network with skip connections and a
/// sigmoid head. Fully convolutional: accepts any input whose sides are
/// divisible by 16 and returns a same-sized probability tensor.
class UNet {
 public:
  UNet() = default;
  UNet(int base_channels, std::uint64_t seed);

  nn::Tensor forward(const nn::Tensor& x);
  nn::Tensor backward(const nn::Tensor& grad_out);
  std::vector<nn::ParamView> params();
  void zero_grads();

  int base_channels() const { return base_channels_; }
  static constexpr int kLevels = 4;

 private:
  int base_channels_ = 0;
  nn::Sequential enc_[kLevels], down_[kLevels];
  nn::Sequential bottleneck_;
  nn::Sequential up_[kLevels], dec_[kLevels];
  nn::Sequential head_;
  int skip_channels_[kLevels] = {0, 0, 0, 0};
  nn::Tensor skips_[kLevels];
};

struct SegmentationModel {
  int input_size = 256;
  int channels = 16;  // effective first-level width
  UNet net;
};

struct SegmentationLogRow {
  int epoch = 0;  // 1-based
  double dice_loss = 0.0;
  double wall_seconds = 0.0;
};

struct SegmentationLog {
  std::vector<SegmentationLogRow> rows;
  void write_csv(const std::filesystem::path& path) const;
};

struct SegmentationResult {
  SegmentationModel model;
  SegmentationLog log;
};

class SegmentationDivergedError : public TrainingDivergedError {
 public:
  SegmentationDivergedError(const std::string& what, int failed_epoch,
                            std::shared_ptr<SegmentationResult> last_good)
      : TrainingDivergedError(what, failed_epoch),
        last_good_(std::move(last_good)) {}

  const std::shared_ptr<SegmentationResult>& last_good() const {
    return last_good_;
  }

 private:
  std::shared_ptr<SegmentationResult> last_good_;
};

/// Soft Dice loss between a probability map and a binary mask (see the
/// formula in nn/losses.hpp). Shapes must match exactly.
double dice_loss(const FloatImage& pred, const MaskImage& target,
                 double epsilon);

/// Trains on (synthetic image, clean binary mask) pairs; the lists are
/// index-paired and must have equal nonzero length. Inputs whose size is not
/// cfg.input_size are resized (images bilinearly, masks through their
/// grayscale rendering, then re-thresholded).
SegmentationResult train_segmentation(std::span<const GrayImage> fakes,
                                      std::span<const MaskImage> masks,
                                      const SegmentationConfig& cfg);

/// Probability map for one patch, at the model's input size.
FloatImage predict(SegmentationModel& model, const GrayImage& patch);

void save_segmentation(const std::filesystem::path& path,
                       SegmentationModel& model, std::uint64_t seed,
                       int epoch);
SegmentationModel load_segmentation(const std::filesystem::path& path);

}  // namespace villi
