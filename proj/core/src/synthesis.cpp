#include "villi/synthesis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "villi/nn/adam.hpp"
#include "villi/nn/checkpoint.hpp"
#include "villi/nn/losses.hpp"
#include "villi/nn/tensor.hpp"
#include "villi/rng.hpp"

namespace villi {

using nn::Tensor;

std::string to_string(Direction d) {
  return d == Direction::kMaskToImage ? "m2i" : "i2m";
}

std::string to_string(AdversarialLoss l) {
  return l == AdversarialLoss::kLeastSquares ? "least-squares" : "cross-entropy";
}

AdversarialLoss parse_adversarial_loss(const std::string& s) {
  if (s == "least-squares") return AdversarialLoss::kLeastSquares;
  if (s == "cross-entropy") return AdversarialLoss::kCrossEntropy;
  throw std::invalid_argument("unknown adversarial loss: " + s);
}

void SynthesisConfig::validate() const {
  if (epochs < 1)
    throw std::invalid_argument("SynthesisConfig: epochs must be >= 1");
  if (cycle_weight < 0.0)
    throw std::invalid_argument("SynthesisConfig: cycle_weight must be >= 0");
  if (image_size < 4 || image_size % 4 != 0)
    throw std::invalid_argument(
        "SynthesisConfig: image_size must be a positive multiple of 4");
  if (learning_rate <= 0.0)
    throw std::invalid_argument("SynthesisConfig: learning_rate must be > 0");
  if (base_channels < 1)
    throw std::invalid_argument("SynthesisConfig: base_channels must be >= 1");
}

void TrainingLog::write_csv(const std::filesystem::path& path) const {
  if (!path.parent_path().empty())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path.string());
  out << "epoch,g_loss,d_loss,cycle_loss,wall_seconds\n";
  char buf[160];
  for (const TrainingLogRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f,%.3f\n", r.epoch,
                  r.g_loss, r.d_loss, r.cycle_loss, r.wall_seconds);
    out << buf;
  }
}

namespace {

std::unique_ptr<nn::Conv2d> conv(int in_c, int out_c, int k, int s, int p,
                                 Rng& rng, double init_std = 0.02) {
  auto c = std::make_unique<nn::Conv2d>(in_c, out_c, k, s, p);
  c->init_gaussian(rng, init_std);
  return c;
}

nn::Sequential res_body(int c, Rng& rng) {
  nn::Sequential body;
  body.add(conv(c, c, 3, 1, 1, rng));
  body.add(std::make_unique<nn::InstanceNorm>(c));
  body.add(std::make_unique<nn::ReLU>());
  body.add(conv(c, c, 3, 1, 1, rng));
  body.add(std::make_unique<nn::InstanceNorm>(c));
  return body;
}

nlohmann::json generator_arch_json(Direction d, const GeneratorArch& a) {
  return {{"direction", to_string(d)},
          {"base_channels", a.base_channels},
          {"res_blocks", a.res_blocks}};
}

}  // namespace

GeneratorModel make_generator(Direction direction, const GeneratorArch& arch,
                              std::uint64_t seed) {
  if (arch.base_channels < 1 || arch.res_blocks < 0)
    throw std::invalid_argument("make_generator: bad architecture");
  Rng rng(seed);
  const int c = arch.base_channels;
  GeneratorModel model;
  model.direction = direction;
  model.arch = arch;
  nn::Sequential& net = model.net;
  // Encoder: two stride-2 stages.
  net.add(conv(1, c, 7, 1, 3, rng));
  net.add(std::make_unique<nn::InstanceNorm>(c));
  net.add(std::make_unique<nn::ReLU>());
  net.add(conv(c, 2 * c, 3, 2, 1, rng));
  net.add(std::make_unique<nn::InstanceNorm>(2 * c));
  net.add(std::make_unique<nn::ReLU>());
  net.add(conv(2 * c, 4 * c, 3, 2, 1, rng));
  net.add(std::make_unique<nn::InstanceNorm>(4 * c));
  net.add(std::make_unique<nn::ReLU>());
  // Transformation trunk.
  for (int i = 0; i < arch.res_blocks; ++i)
    net.add(std::make_unique<nn::Residual>(res_body(4 * c, rng)));
  // Mirrored decoder: nearest upsample + conv.
  net.add(std::make_unique<nn::Upsample2x>());
  net.add(conv(4 * c, 2 * c, 3, 1, 1, rng));
  net.add(std::make_unique<nn::InstanceNorm>(2 * c));
  net.add(std::make_unique<nn::ReLU>());
  net.add(std::make_unique<nn::Upsample2x>());
  net.add(conv(2 * c, c, 3, 1, 1, rng));
  net.add(std::make_unique<nn::InstanceNorm>(c));
  net.add(std::make_unique<nn::ReLU>());
  net.add(conv(c, 1, 7, 1, 3, rng));
  net.add(std::make_unique<nn::Tanh>());
  return model;
}

DiscriminatorModel make_discriminator(const DiscriminatorArch& arch,
                                      std::uint64_t seed) {
  if (arch.base_channels < 1)
    throw std::invalid_argument("make_discriminator: bad architecture");
  Rng rng(seed);
  const int d = arch.base_channels;
  DiscriminatorModel model;
  model.arch = arch;
  nn::Sequential& net = model.net;
  net.add(conv(1, d, 4, 2, 1, rng));
  net.add(std::make_unique<nn::LeakyReLU>(0.2f));
  net.add(conv(d, 2 * d, 4, 2, 1, rng));
  net.add(std::make_unique<nn::InstanceNorm>(2 * d));
  net.add(std::make_unique<nn::LeakyReLU>(0.2f));
  net.add(conv(2 * d, 4 * d, 4, 2, 1, rng));
  net.add(std::make_unique<nn::InstanceNorm>(4 * d));
  net.add(std::make_unique<nn::LeakyReLU>(0.2f));
  net.add(conv(4 * d, 1, 4, 1, 1, rng));
  return model;
}

namespace {

Tensor image_to_net_input(const GrayImage& img, int target_size) {
  if (img.width == target_size && img.height == target_size)
    return nn::to_tensor_symmetric(img);
  return nn::to_tensor_symmetric(
      resize_bilinear(img, target_size, target_size));
}

void check_generator_input(const nn::Sequential& net, const GrayImage& img) {
  if (img.width <= 0 || img.height <= 0)
    throw std::invalid_argument("generator: empty input image");
  if (!net.empty() && (img.width % 4 != 0 || img.height % 4 != 0))
    throw std::invalid_argument(
        "generator: input sides must be divisible by 4");
}

/// Adversarial loss on a score map against a constant target; fills grad.
double adversarial_loss(AdversarialLoss kind, const Tensor& scores,
                        float target, Tensor& grad) {
  grad = Tensor(scores.c, scores.h, scores.w);
  std::span<const float> s(scores.v);
  std::span<float> g(grad.v);
  if (kind == AdversarialLoss::kLeastSquares)
    return nn::mse_const_loss<float>(s, target, g);
  return nn::bce_logits_const_loss<float>(s, target, g);
}

struct EpochAccumulator {
  double g_loss = 0.0, d_loss = 0.0, cycle_loss = 0.0;
  long items = 0;

  TrainingLogRow mean_row(int epoch, double wall) const {
    TrainingLogRow r;
    r.epoch = epoch;
    const double n = std::max(1L, items);
    r.g_loss = g_loss / n;
    r.d_loss = d_loss / n;
    r.cycle_loss = cycle_loss / n;
    r.wall_seconds = wall;
    return r;
  }
};

}  // namespace

SynthesisResult train_synthesis(const BatchStream& stream,
                                const SynthesisConfig& cfg) {
  cfg.validate();
  if (!stream) throw std::invalid_argument("train_synthesis: null stream");

  const GeneratorArch g_arch{cfg.base_channels, cfg.resolved_res_blocks()};
  const DiscriminatorArch d_arch{cfg.base_channels};
  GeneratorModel gen_m2i = make_generator(
      Direction::kMaskToImage, g_arch, derive_seed(cfg.seed, "gen_m2i"));
  GeneratorModel gen_i2m = make_generator(
      Direction::kImageToMask, g_arch, derive_seed(cfg.seed, "gen_i2m"));
  DiscriminatorModel disc_i =
      make_discriminator(d_arch, derive_seed(cfg.seed, "disc_i"));
  DiscriminatorModel disc_m =
      make_discriminator(d_arch, derive_seed(cfg.seed, "disc_m"));

  const std::vector<nn::ParamView> gen_params = [&] {
    std::vector<nn::ParamView> p = gen_m2i.net.params();
    for (nn::ParamView q : gen_i2m.net.params()) p.push_back(q);
    return p;
  }();
  // One optimizer drives both generators; each discriminator has its own.
  nn::Adam opt_g(gen_params, cfg.learning_rate, 0.5, 0.999);
  nn::Adam opt_di(disc_i.net.params(), cfg.learning_rate, 0.5, 0.999);
  nn::Adam opt_dm(disc_m.net.params(), cfg.learning_rate, 0.5, 0.999);

  TrainingLog log;
  auto snapshot = [&] {
    return std::make_pair(nn::snapshot_params(gen_m2i.net.params()),
                          nn::snapshot_params(gen_i2m.net.params()));
  };
  auto last_good = snapshot();
  int last_good_epoch = 0;  // 1-based; 0 = no epoch completed yet

  auto make_last_good_result = [&] {
    auto result = std::make_shared<SynthesisResult>();
    result->gen_m2i = make_generator(Direction::kMaskToImage, g_arch,
                                     derive_seed(cfg.seed, "gen_m2i"));
    result->gen_i2m = make_generator(Direction::kImageToMask, g_arch,
                                     derive_seed(cfg.seed, "gen_i2m"));
    nn::restore_params(result->gen_m2i.net.params(), last_good.first);
    nn::restore_params(result->gen_i2m.net.params(), last_good.second);
    result->log = log;
    return result;
  };

  const float lambda = static_cast<float>(cfg.cycle_weight);
  long total_items = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<PairedBatch> batches = stream(epoch);
    EpochAccumulator acc;

    for (const PairedBatch& batch : batches) {
      if (batch.reals.size() != batch.masks.size())
        throw std::invalid_argument(
            "train_synthesis: batch reals/masks length mismatch");
      for (std::size_t i = 0; i < batch.size(); ++i) {
        const Tensor m = image_to_net_input(batch.masks[i], cfg.image_size);
        const Tensor x = image_to_net_input(batch.reals[i], cfg.image_size);

        // Generator phase. Each generator runs one translate pass and one
        // reconstruction pass; backward order is arranged so every cached
        // forward is consumed before the net runs again.
        nn::zero_param_grads(gen_params);

        const Tensor fake_i = gen_m2i.net.forward(m);
        const Tensor rec_m = gen_i2m.net.forward(fake_i);

        Tensor adv_grad;
        const Tensor scores_fi = disc_i.net.forward(fake_i);
        const double adv_i =
            adversarial_loss(cfg.adversarial_loss, scores_fi, 1.f, adv_grad);
        Tensor d_fake_i = disc_i.net.backward(adv_grad);

        Tensor cyc_grad_m(rec_m.c, rec_m.h, rec_m.w);
        const double cyc_m = nn::l1_loss<float>(
            std::span<const float>(rec_m.v), std::span<const float>(m.v),
            std::span<float>(cyc_grad_m.v));
        for (float& g : cyc_grad_m.v) g *= lambda;
        const Tensor d_fake_i_cyc = gen_i2m.net.backward(cyc_grad_m);
        for (std::size_t k = 0; k < d_fake_i.v.size(); ++k)
          d_fake_i.v[k] += d_fake_i_cyc.v[k];
        gen_m2i.net.backward(d_fake_i);

        const Tensor fake_m = gen_i2m.net.forward(x);
        const Tensor rec_i = gen_m2i.net.forward(fake_m);

        const Tensor scores_fm = disc_m.net.forward(fake_m);
        const double adv_m =
            adversarial_loss(cfg.adversarial_loss, scores_fm, 1.f, adv_grad);
        Tensor d_fake_m = disc_m.net.backward(adv_grad);

        Tensor cyc_grad_i(rec_i.c, rec_i.h, rec_i.w);
        const double cyc_i = nn::l1_loss<float>(
            std::span<const float>(rec_i.v), std::span<const float>(x.v),
            std::span<float>(cyc_grad_i.v));
        for (float& g : cyc_grad_i.v) g *= lambda;
        const Tensor d_fake_m_cyc = gen_m2i.net.backward(cyc_grad_i);
        for (std::size_t k = 0; k < d_fake_m.v.size(); ++k)
          d_fake_m.v[k] += d_fake_m_cyc.v[k];
        gen_i2m.net.backward(d_fake_m);

        opt_g.step();

        // Discriminator phase; generator outputs are treated as constants.
        auto disc_step = [&](DiscriminatorModel& disc, nn::Adam& opt,
                             const Tensor& real, const Tensor& fake) {
          disc.net.zero_grads();
          Tensor grad;
          const Tensor s_real = disc.net.forward(real);
          const double l_real =
              adversarial_loss(cfg.adversarial_loss, s_real, 1.f, grad);
          for (float& g : grad.v) g *= 0.5f;
          disc.net.backward(grad);
          const Tensor s_fake = disc.net.forward(fake);
          const double l_fake =
              adversarial_loss(cfg.adversarial_loss, s_fake, 0.f, grad);
          for (float& g : grad.v) g *= 0.5f;
          disc.net.backward(grad);
          opt.step();
          return 0.5 * (l_real + l_fake);
        };
        const double d_i_loss = disc_step(disc_i, opt_di, x, fake_i);
        const double d_m_loss = disc_step(disc_m, opt_dm, m, fake_m);

        const double cycle_raw = 0.5 * (cyc_m + cyc_i);
        const double g_total =
            adv_i + adv_m + cfg.cycle_weight * (cyc_m + cyc_i);
        const double d_total = 0.5 * (d_i_loss + d_m_loss);
        if (!std::isfinite(g_total) || !std::isfinite(d_total)) {
          auto result = make_last_good_result();
          throw SynthesisDivergedError(
              "train_synthesis: non-finite loss at epoch " +
                  std::to_string(epoch + 1) + " (completed epochs: " +
                  std::to_string(last_good_epoch) + ")",
              epoch + 1, std::move(result));
        }
        acc.g_loss += g_total;
        acc.d_loss += d_total;
        acc.cycle_loss += cycle_raw;
        ++acc.items;
        ++total_items;
      }
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    log.rows.push_back(acc.mean_row(epoch + 1, wall));
    last_good = snapshot();
    last_good_epoch = epoch + 1;

    if (!cfg.checkpoint_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof(name), "epoch_%03d", epoch + 1);
      const std::filesystem::path dir = cfg.checkpoint_dir / name;
      save_generator(dir / "gen_m2i.ckpt", gen_m2i, cfg.seed, epoch + 1);
      save_generator(dir / "gen_i2m.ckpt", gen_i2m, cfg.seed, epoch + 1);
    }
  }

  if (total_items == 0)
    throw std::invalid_argument("train_synthesis: stream yielded no batches");

  SynthesisResult result;
  result.gen_m2i = std::move(gen_m2i);
  result.gen_i2m = std::move(gen_i2m);
  result.log = std::move(log);
  return result;
}

GrayImage translate(GeneratorModel& gen, const GrayImage& img) {
  check_generator_input(gen.net, img);
  const Tensor out = gen.net.forward(nn::to_tensor_symmetric(img));
  return nn::from_tensor_symmetric(out);
}

GrayImage synthesize(GeneratorModel& gen, const GrayImage& mask) {
  if (gen.direction != Direction::kMaskToImage)
    throw std::invalid_argument(
        "synthesize: generator direction must be mask-to-image");
  return translate(gen, mask);
}

double cycle_error(GeneratorModel& g_ab, GeneratorModel& g_ba,
                   const GrayImage& img) {
  if (g_ab.direction == g_ba.direction)
    throw std::invalid_argument(
        "cycle_error: generators must have complementary directions");
  const GrayImage mid = translate(g_ab, img);
  const GrayImage back = translate(g_ba, mid);
  if (!back.same_shape(img))
    throw std::invalid_argument("cycle_error: round trip changed shape");
  double sum = 0.0;
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    sum += std::abs(static_cast<double>(img.pixels[i]) - back.pixels[i]);
  return img.pixels.empty() ? 0.0 : sum / static_cast<double>(img.pixels.size());
}

void save_generator(const std::filesystem::path& path, GeneratorModel& model,
                    std::uint64_t seed, int epoch) {
  nn::Checkpoint ckpt;
  const nlohmann::json arch = generator_arch_json(model.direction, model.arch);
  ckpt.header = {{"format", "villi-generator"},
                 {"version", 1},
                 {"arch", arch},
                 {"arch_hash", fnv1a64(arch.dump())},
                 {"seed", seed},
                 {"epoch", epoch}};
  nn::pack_params(ckpt, model.net.params());
  nn::save_checkpoint(path, ckpt);
}

GeneratorModel load_generator(const std::filesystem::path& path) {
  const nn::Checkpoint ckpt = nn::load_checkpoint(path);
  if (ckpt.header.value("format", "") != "villi-generator")
    throw std::runtime_error("not a generator checkpoint: " + path.string());
  const nlohmann::json& arch = ckpt.header.at("arch");
  if (ckpt.header.at("arch_hash").get<std::uint64_t>() !=
      fnv1a64(arch.dump()))
    throw std::runtime_error("generator checkpoint arch hash mismatch");
  const Direction dir = arch.at("direction").get<std::string>() == "m2i"
                            ? Direction::kMaskToImage
                            : Direction::kImageToMask;
  GeneratorArch ga{arch.at("base_channels").get<int>(),
                   arch.at("res_blocks").get<int>()};
  GeneratorModel model = make_generator(dir, ga, 0);
  nn::unpack_params(ckpt, model.net.params());
  return model;
}

}  // namespace villi
