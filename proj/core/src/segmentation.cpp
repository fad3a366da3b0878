#include "villi/segmentation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "villi/nn/adam.hpp"
#include "villi/nn/checkpoint.hpp"
#include "villi/nn/losses.hpp"
#include "villi/nn/tensor.hpp"
#include "villi/rng.hpp"

namespace villi {

using nn::Tensor;

void SegmentationConfig::validate() const {
  if (epochs < 1)
    throw std::invalid_argument("SegmentationConfig: epochs must be >= 1");
  if (input_size < 16 || input_size % 16 != 0)
    throw std::invalid_argument(
        "SegmentationConfig: input_size must be a positive multiple of 16");
  if (learning_rate <= 0.0)
    throw std::invalid_argument("SegmentationConfig: learning_rate must be > 0");
  if (binarize_threshold <= 0.0 || binarize_threshold >= 1.0)
    throw std::invalid_argument(
        "SegmentationConfig: binarize_threshold must lie in (0, 1)");
  if (dice_epsilon <= 0.0)
    throw std::invalid_argument("SegmentationConfig: dice_epsilon must be > 0");
  if (base_channels < 1 || width_multiplier <= 0.0)
    throw std::invalid_argument("SegmentationConfig: bad channel widths");
  if (effective_channels() < 1)
    throw std::invalid_argument(
        "SegmentationConfig: width_multiplier collapses the network");
}

int SegmentationConfig::effective_channels() const {
  return static_cast<int>(std::lround(base_channels * width_multiplier));
}

void SegmentationLog::write_csv(const std::filesystem::path& path) const {
  if (!path.parent_path().empty())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path.string());
  out << "epoch,dice_loss,wall_seconds\n";
  char buf[96];
  for (const SegmentationLogRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.3f\n", r.epoch, r.dice_loss,
                  r.wall_seconds);
    out << buf;
  }
}

namespace {

std::unique_ptr<nn::Conv2d> he_conv(int in_c, int out_c, int k, int s, int p,
                                    Rng& rng) {
  auto c = std::make_unique<nn::Conv2d>(in_c, out_c, k, s, p);
  c->init_he(rng);
  return c;
}

nn::Sequential conv_block(int in_c, int out_c, Rng& rng) {
  nn::Sequential s;
  s.add(he_conv(in_c, out_c, 3, 1, 1, rng));
  s.add(std::make_unique<nn::InstanceNorm>(out_c));
  s.add(std::make_unique<nn::ReLU>());
  return s;
}

nn::Sequential down_block(int in_c, int out_c, Rng& rng) {
  nn::Sequential s;
  s.add(he_conv(in_c, out_c, 3, 2, 1, rng));
  s.add(std::make_unique<nn::InstanceNorm>(out_c));
  s.add(std::make_unique<nn::ReLU>());
  return s;
}

nn::Sequential up_block(int in_c, int out_c, Rng& rng) {
  nn::Sequential s;
  s.add(std::make_unique<nn::Upsample2x>());
  s.add(he_conv(in_c, out_c, 3, 1, 1, rng));
  s.add(std::make_unique<nn::InstanceNorm>(out_c));
  s.add(std::make_unique<nn::ReLU>());
  return s;
}

}  // namespace

UNet::UNet(int base_channels, std::uint64_t seed)
    : base_channels_(base_channels) {
  if (base_channels < 1)
    throw std::invalid_argument("UNet: base_channels must be >= 1");
  Rng rng(seed);
  const int c0 = base_channels;
  int in_c = 1;
  for (int i = 0; i < kLevels; ++i) {
    const int ci = c0 << i;
    enc_[i] = conv_block(in_c, ci, rng);
    skip_channels_[i] = ci;
    const int next = i + 1 < kLevels ? c0 << (i + 1) : 2 * ci;
    down_[i] = down_block(ci, next, rng);
    in_c = next;
  }
  bottleneck_ = conv_block(in_c, in_c, rng);
  for (int i = kLevels - 1; i >= 0; --i) {
    const int ci = skip_channels_[i];
    up_[i] = up_block(in_c, ci, rng);
    dec_[i] = conv_block(2 * ci, ci, rng);
    in_c = ci;
  }
  head_.add(he_conv(c0, 1, 1, 1, 0, rng));
  head_.add(std::make_unique<nn::Sigmoid>());
}

Tensor UNet::forward(const Tensor& x) {
  if (base_channels_ == 0) throw std::logic_error("UNet: not constructed");
  if (x.c != 1)
    throw std::invalid_argument("UNet: expects a single-channel input");
  const int div = 1 << kLevels;
  if (x.h < div || x.w < div || x.h % div != 0 || x.w % div != 0)
    throw std::invalid_argument(
        "UNet: input sides must be positive multiples of 16");
  Tensor t = x;
  for (int i = 0; i < kLevels; ++i) {
    skips_[i] = enc_[i].forward(t);
    t = down_[i].forward(skips_[i]);
  }
  t = bottleneck_.forward(t);
  for (int i = kLevels - 1; i >= 0; --i) {
    const Tensor u = up_[i].forward(t);
    t = dec_[i].forward(nn::concat_channels(u, skips_[i]));
  }
  return head_.forward(t);
}

Tensor UNet::backward(const Tensor& grad_out) {
  Tensor g = head_.backward(grad_out);
  // Skip-path gradients surface twice per level: once through the decoder
  // concat and once through the deeper encoder chain; they join at enc_[i].
  Tensor skip_grads[kLevels];
  for (int i = 0; i < kLevels; ++i) {
    const Tensor joined = dec_[i].backward(g);
    Tensor gu;
    nn::split_channels(joined, skip_channels_[i], gu, skip_grads[i]);
    g = up_[i].backward(gu);
  }
  g = bottleneck_.backward(g);
  for (int i = kLevels - 1; i >= 0; --i) {
    Tensor gs = down_[i].backward(g);
    if (!gs.same_shape(skip_grads[i]))
      throw std::logic_error("UNet: skip gradient shape mismatch");
    for (std::size_t k = 0; k < gs.v.size(); ++k)
      gs.v[k] += skip_grads[i].v[k];
    g = enc_[i].backward(gs);
  }
  return g;
}

std::vector<nn::ParamView> UNet::params() {
  std::vector<nn::ParamView> out;
  auto append = [&out](nn::Sequential& s) {
    for (nn::ParamView p : s.params()) out.push_back(p);
  };
  for (int i = 0; i < kLevels; ++i) {
    append(enc_[i]);
    append(down_[i]);
  }
  append(bottleneck_);
  for (int i = 0; i < kLevels; ++i) {
    append(up_[i]);
    append(dec_[i]);
  }
  append(head_);
  return out;
}

void UNet::zero_grads() { nn::zero_param_grads(params()); }

double dice_loss(const FloatImage& pred, const MaskImage& target,
                 double epsilon) {
  if (pred.width != target.width || pred.height != target.height)
    throw std::invalid_argument("dice_loss: shape mismatch");
  std::vector<double> p(pred.pixels.begin(), pred.pixels.end());
  std::vector<double> t(target.pixels.begin(), target.pixels.end());
  std::vector<double> grad(p.size());
  return nn::soft_dice_loss<double>(p, t, epsilon, grad);
}

namespace {

Tensor mask_target_tensor(const MaskImage& mask, int size) {
  if (mask.width == size && mask.height == size) {
    Tensor t(1, size, size);
    for (std::size_t i = 0; i < mask.pixels.size(); ++i)
      t.v[i] = mask.pixels[i] ? 1.f : 0.f;
    return t;
  }
  const MaskImage resized =
      gray_to_mask(resize_bilinear(mask_to_gray(mask), size, size));
  Tensor t(1, size, size);
  for (std::size_t i = 0; i < resized.pixels.size(); ++i)
    t.v[i] = resized.pixels[i] ? 1.f : 0.f;
  return t;
}

Tensor image_input_tensor(const GrayImage& img, int size) {
  if (img.width == size && img.height == size) return nn::to_tensor_unit(img);
  return nn::to_tensor_unit(resize_bilinear(img, size, size));
}

}  // namespace

SegmentationResult train_segmentation(std::span<const GrayImage> fakes,
                                      std::span<const MaskImage> masks,
                                      const SegmentationConfig& cfg) {
  cfg.validate();
  if (fakes.empty())
    throw std::invalid_argument("train_segmentation: empty training set");
  if (fakes.size() != masks.size())
    throw std::invalid_argument(
        "train_segmentation: fakes/masks length mismatch");

  SegmentationModel model;
  model.input_size = cfg.input_size;
  model.channels = cfg.effective_channels();
  model.net = UNet(model.channels, derive_seed(cfg.seed, "unet_init"));

  nn::Adam opt(model.net.params(), cfg.learning_rate);
  Rng order_rng(derive_seed(cfg.seed, "unet_order"));
  const float eps = static_cast<float>(cfg.dice_epsilon);

  SegmentationLog log;
  auto last_good = nn::snapshot_params(model.net.params());
  int last_good_epoch = 0;  // 1-based; 0 = no epoch completed yet

  std::vector<Tensor> inputs, targets;
  inputs.reserve(fakes.size());
  targets.reserve(masks.size());
  for (std::size_t i = 0; i < fakes.size(); ++i) {
    inputs.push_back(image_input_tensor(fakes[i], cfg.input_size));
    targets.push_back(mask_target_tensor(masks[i], cfg.input_size));
  }

  std::vector<std::size_t> order(fakes.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    order_rng.shuffle(order);
    double loss_sum = 0.0;

    for (std::size_t idx : order) {
      model.net.zero_grads();
      const Tensor prob = model.net.forward(inputs[idx]);
      Tensor grad(prob.c, prob.h, prob.w);
      const double loss = nn::soft_dice_loss<float>(
          std::span<const float>(prob.v), std::span<const float>(targets[idx].v),
          eps, std::span<float>(grad.v));
      if (!std::isfinite(loss)) {
        auto result = std::make_shared<SegmentationResult>();
        result->model.input_size = cfg.input_size;
        result->model.channels = model.channels;
        result->model.net =
            UNet(model.channels, derive_seed(cfg.seed, "unet_init"));
        nn::restore_params(result->model.net.params(), last_good);
        result->log = log;
        throw SegmentationDivergedError(
            "train_segmentation: non-finite loss at epoch " +
                std::to_string(epoch + 1) + " (completed epochs: " +
                std::to_string(last_good_epoch) + ")",
            epoch + 1, std::move(result));
      }
      model.net.backward(grad);
      opt.step();
      loss_sum += loss;
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    log.rows.push_back(
        {epoch + 1, loss_sum / static_cast<double>(order.size()), wall});
    last_good = nn::snapshot_params(model.net.params());
    last_good_epoch = epoch + 1;

    if (!cfg.checkpoint_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof(name), "epoch_%03d", epoch + 1);
      save_segmentation(cfg.checkpoint_dir / name / "unet.ckpt", model,
                        cfg.seed, epoch + 1);
    }
  }

  SegmentationResult result;
  result.model = std::move(model);
  result.log = std::move(log);
  return result;
}

FloatImage predict(SegmentationModel& model, const GrayImage& patch) {
  if (patch.width <= 0 || patch.height <= 0)
    throw std::invalid_argument("predict: empty input");
  const Tensor out =
      model.net.forward(image_input_tensor(patch, model.input_size));
  return nn::to_prob_map(out);
}

void save_segmentation(const std::filesystem::path& path,
                       SegmentationModel& model, std::uint64_t seed,
                       int epoch) {
  nn::Checkpoint ckpt;
  const nlohmann::json arch = {{"input_size", model.input_size},
                               {"channels", model.channels},
                               {"levels", UNet::kLevels}};
  ckpt.header = {{"format", "villi-unet"},
                 {"version", 1},
                 {"arch", arch},
                 {"arch_hash", fnv1a64(arch.dump())},
                 {"seed", seed},
                 {"epoch", epoch}};
  nn::pack_params(ckpt, model.net.params());
  nn::save_checkpoint(path, ckpt);
}

SegmentationModel load_segmentation(const std::filesystem::path& path) {
  const nn::Checkpoint ckpt = nn::load_checkpoint(path);
  if (ckpt.header.value("format", "") != "villi-unet")
    throw std::runtime_error("not a segmentation checkpoint: " + path.string());
  const nlohmann::json& arch = ckpt.header.at("arch");
  if (ckpt.header.at("arch_hash").get<std::uint64_t>() !=
      fnv1a64(arch.dump()))
    throw std::runtime_error("segmentation checkpoint arch hash mismatch");
  SegmentationModel model;
  model.input_size = arch.at("input_size").get<int>();
  model.channels = arch.at("channels").get<int>();
  model.net = UNet(model.channels, 0);
  nn::unpack_params(ckpt, model.net.params());
  return model;
}

}  // namespace villi
