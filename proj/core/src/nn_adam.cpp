#include "villi/nn/adam.hpp"

#include <cmath>

namespace villi::nn {

Adam::Adam(std::vector<ParamView> params, double lr, double beta1,
           double beta2, double eps)
    : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2),
      eps_(eps) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const ParamView& p : params_) {
    m_.emplace_back(p.value->size(), 0.f);
    v_.emplace_back(p.value->size(), 0.f);
  }
}

void Adam::step() {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    std::vector<float>& value = *params_[i].value;
    const std::vector<float>& grad = *params_[i].grad;
    std::vector<float>& m = m_[i];
    std::vector<float>& v = v_[i];
    for (std::size_t j = 0; j < value.size(); ++j) {
      const double g = grad[j];
      m[j] = static_cast<float>(beta1_ * m[j] + (1.0 - beta1_) * g);
      v[j] = static_cast<float>(beta2_ * v[j] + (1.0 - beta2_) * g * g);
      const double mhat = m[j] / bc1;
      const double vhat = v[j] / bc2;
      value[j] -=
          static_cast<float>(lr_ * mhat / (std::sqrt(vhat) + eps_));
    }
  }
}

}  // namespace villi::nn
