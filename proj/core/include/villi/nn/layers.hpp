#pragma once

#include <memory>
#include <string>
#include <vector>

#include "villi/nn/tensor.hpp"
#include "villi/rng.hpp"

namespace villi::nn {

/// Mutable view of one parameter array and its gradient accumulator.
struct ParamView {
  std::vector<float>* value;
  std::vector<float>* grad;
};

/// A differentiable op with internal state. forward() caches whatever the
/// subsequent backward() needs; backward() consumes the gradient w.r.t. the
/// layer output, accumulates parameter gradients and returns the gradient
/// w.r.t. the layer input. One forward per backward.
class Layer {
 public:
  virtual ~Layer() = default;
  virtual Tensor forward(const Tensor& x) = 0;
  virtual Tensor backward(const Tensor& grad_out) = 0;
  virtual std::vector<ParamView> params() { return {}; }
  void zero_grads();
};

class Conv2d final : public Layer {
 public:
  Conv2d(int in_c, int out_c, int kernel, int stride, int pad);

  /// Weights ~ N(0, stddev), biases 0.
  void init_gaussian(Rng& rng, double stddev);
  /// He initialization: N(0, sqrt(2 / fan_in)).
  void init_he(Rng& rng);

  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& grad_out) override;
  std::vector<ParamView> params() override;

  int in_channels() const { return in_c_; }
  int out_channels() const { return out_c_; }

 private:
  int in_c_, out_c_, kernel_, stride_, pad_;
  std::vector<float> weight_, bias_;        // [out_c][in_c][k][k], [out_c]
  std::vector<float> weight_grad_, bias_grad_;
  std::vector<float> col_;                  // cached im2col of the last input
  int in_h_ = 0, in_w_ = 0, out_h_ = 0, out_w_ = 0;
};

/// Per-channel normalization over the spatial extent of a single sample,
/// with learned affine scale/shift. Stateless across samples.
class InstanceNorm final : public Layer {
 public:
  explicit InstanceNorm(int channels, float eps = 1e-5f);

  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& grad_out) override;
  std::vector<ParamView> params() override;

 private:
  int channels_;
  float eps_;
  std::vector<float> gamma_, beta_, gamma_grad_, beta_grad_;
  Tensor xhat_;
  std::vector<float> inv_std_;
};

class ReLU final : public Layer {
 public:
  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& grad_out) override;

 private:
  Tensor out_;
};

class LeakyReLU final : public Layer {
 public:
  explicit LeakyReLU(float slope = 0.2f) : slope_(slope) {}
  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& grad_out) override;

 private:
  float slope_;
  Tensor in_;
};

class Tanh final : public Layer {
 public:
  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& grad_out) override;

 private:
  Tensor out_;
};

class Sigmoid final : public Layer {
 public:
  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& grad_out) override;

 private:
  Tensor out_;
};

/// Nearest-neighbour 2x upsampling.
class Upsample2x final : public Layer {
 public:
  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& grad_out) override;
};

/// Ordered layer chain. An empty Sequential is the identity, which the
/// tests lean on for stub generators.
class Sequential final : public Layer {
 public:
  Sequential() = default;
  void add(std::unique_ptr<Layer> layer) { layers_.push_back(std::move(layer)); }

  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& grad_out) override;
  std::vector<ParamView> params() override;

  bool empty() const { return layers_.empty(); }

 private:
  std::vector<std::unique_ptr<Layer>> layers_;
};

/// y = x + body(x). Input and output shapes must match.
class Residual final : public Layer {
 public:
  explicit Residual(Sequential body) : body_(std::move(body)) {}

  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& grad_out) override;
  std::vector<ParamView> params() override;

 private:
  Sequential body_;
};

/// Channel-wise concatenation and its inverse; used for skip connections.
Tensor concat_channels(const Tensor& a, const Tensor& b);
void split_channels(const Tensor& joined, int first_channels, Tensor& grad_a,
                    Tensor& grad_b);

void zero_param_grads(const std::vector<ParamView>& params);

/// Flat copies of all parameter values, for epoch snapshots.
std::vector<std::vector<float>> snapshot_params(
    const std::vector<ParamView>& params);
void restore_params(const std::vector<ParamView>& params,
                    const std::vector<std::vector<float>>& snapshot);

}  // namespace villi::nn
