#pragma once

#include <vector>

#include "villi/nn/layers.hpp"

namespace villi::nn {

/// Adaptive-moment optimizer over a fixed parameter set. The views must
/// stay valid for the optimizer's lifetime.
class Adam {
 public:
  Adam(std::vector<ParamView> params, double lr, double beta1 = 0.9,
       double beta2 = 0.999, double eps = 1e-8);

  /// Applies one update from the accumulated gradients (does not zero them).
  void step();

  void set_lr(double lr) { lr_ = lr; }
  double lr() const { return lr_; }

 private:
  std::vector<ParamView> params_;
  std::vector<std::vector<float>> m_, v_;
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
};

}  // namespace villi::nn
