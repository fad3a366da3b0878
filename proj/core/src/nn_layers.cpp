#include "villi/nn/layers.hpp"

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>

namespace villi::nn {

using MatrixRM =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRM = Eigen::Map<MatrixRM>;
using ConstMapRM = Eigen::Map<const MatrixRM>;

void Layer::zero_grads() { zero_param_grads(params()); }

// ---------------------------------------------------------------------------
// Conv2d

Conv2d::Conv2d(int in_c, int out_c, int kernel, int stride, int pad)
    : in_c_(in_c), out_c_(out_c), kernel_(kernel), stride_(stride), pad_(pad) {
  if (in_c < 1 || out_c < 1 || kernel < 1 || stride < 1 || pad < 0)
    throw std::invalid_argument("Conv2d: bad shape parameters");
  const std::size_t wsize =
      static_cast<std::size_t>(out_c) * in_c * kernel * kernel;
  weight_.assign(wsize, 0.f);
  bias_.assign(static_cast<std::size_t>(out_c), 0.f);
  weight_grad_.assign(wsize, 0.f);
  bias_grad_.assign(static_cast<std::size_t>(out_c), 0.f);
}

void Conv2d::init_gaussian(Rng& rng, double stddev) {
  for (float& w : weight_)
    w = static_cast<float>(rng.gaussian(0.0, stddev));
  for (float& b : bias_) b = 0.f;
}

void Conv2d::init_he(Rng& rng) {
  const double fan_in = static_cast<double>(in_c_) * kernel_ * kernel_;
  init_gaussian(rng, std::sqrt(2.0 / fan_in));
}

Tensor Conv2d::forward(const Tensor& x) {
  if (x.c != in_c_)
    throw std::invalid_argument("Conv2d: input channel mismatch");
  in_h_ = x.h;
  in_w_ = x.w;
  out_h_ = (x.h + 2 * pad_ - kernel_) / stride_ + 1;
  out_w_ = (x.w + 2 * pad_ - kernel_) / stride_ + 1;
  if (out_h_ < 1 || out_w_ < 1)
    throw std::invalid_argument("Conv2d: input too small for kernel");

  const int ckk = in_c_ * kernel_ * kernel_;
  const int n = out_h_ * out_w_;
  col_.assign(static_cast<std::size_t>(ckk) * n, 0.f);
  // im2col: row = (c * k + ky) * k + kx, column = output pixel index.
  for (int c = 0; c < in_c_; ++c) {
    for (int ky = 0; ky < kernel_; ++ky) {
      for (int kx = 0; kx < kernel_; ++kx) {
        const std::size_t row =
            (static_cast<std::size_t>(c) * kernel_ + ky) * kernel_ + kx;
        float* dst = col_.data() + row * n;
        for (int oy = 0; oy < out_h_; ++oy) {
          const int sy = oy * stride_ + ky - pad_;
          if (sy < 0 || sy >= x.h) {
            dst += out_w_;
            continue;
          }
          const float* src_row =
              x.v.data() + (static_cast<std::size_t>(c) * x.h + sy) * x.w;
          for (int ox = 0; ox < out_w_; ++ox, ++dst) {
            const int sx = ox * stride_ + kx - pad_;
            if (sx >= 0 && sx < x.w) *dst = src_row[sx];
          }
        }
      }
    }
  }

  Tensor out(out_c_, out_h_, out_w_);
  ConstMapRM w_mat(weight_.data(), out_c_, ckk);
  ConstMapRM col_mat(col_.data(), ckk, n);
  MapRM out_mat(out.v.data(), out_c_, n);
  out_mat.noalias() = w_mat * col_mat;
  for (int oc = 0; oc < out_c_; ++oc)
    out_mat.row(oc).array() += bias_[static_cast<std::size_t>(oc)];
  return out;
}

Tensor Conv2d::backward(const Tensor& grad_out) {
  if (grad_out.c != out_c_ || grad_out.h != out_h_ || grad_out.w != out_w_)
    throw std::invalid_argument("Conv2d: gradient shape mismatch");
  const int ckk = in_c_ * kernel_ * kernel_;
  const int n = out_h_ * out_w_;

  ConstMapRM dy(grad_out.v.data(), out_c_, n);
  ConstMapRM col_mat(col_.data(), ckk, n);
  MapRM dw(weight_grad_.data(), out_c_, ckk);
  dw.noalias() += dy * col_mat.transpose();
  for (int oc = 0; oc < out_c_; ++oc)
    bias_grad_[static_cast<std::size_t>(oc)] += dy.row(oc).sum();

  // dcol = W^T * dY, then scatter back (col2im).
  MatrixRM dcol(ckk, n);
  ConstMapRM w_mat(weight_.data(), out_c_, ckk);
  dcol.noalias() = w_mat.transpose() * dy;

  Tensor grad_in(in_c_, in_h_, in_w_);
  for (int c = 0; c < in_c_; ++c) {
    for (int ky = 0; ky < kernel_; ++ky) {
      for (int kx = 0; kx < kernel_; ++kx) {
        const int row = (c * kernel_ + ky) * kernel_ + kx;
        const float* src = dcol.data() + static_cast<std::size_t>(row) * n;
        for (int oy = 0; oy < out_h_; ++oy) {
          const int sy = oy * stride_ + ky - pad_;
          if (sy < 0 || sy >= in_h_) {
            src += out_w_;
            continue;
          }
          float* dst_row =
              grad_in.v.data() +
              (static_cast<std::size_t>(c) * in_h_ + sy) * in_w_;
          for (int ox = 0; ox < out_w_; ++ox, ++src) {
            const int sx = ox * stride_ + kx - pad_;
            if (sx >= 0 && sx < in_w_) dst_row[sx] += *src;
          }
        }
      }
    }
  }
  return grad_in;
}

std::vector<ParamView> Conv2d::params() {
  return {{&weight_, &weight_grad_}, {&bias_, &bias_grad_}};
}

// ---------------------------------------------------------------------------
// InstanceNorm

InstanceNorm::InstanceNorm(int channels, float eps)
    : channels_(channels), eps_(eps) {
  gamma_.assign(static_cast<std::size_t>(channels), 1.f);
  beta_.assign(static_cast<std::size_t>(channels), 0.f);
  gamma_grad_.assign(static_cast<std::size_t>(channels), 0.f);
  beta_grad_.assign(static_cast<std::size_t>(channels), 0.f);
}

Tensor InstanceNorm::forward(const Tensor& x) {
  if (x.c != channels_)
    throw std::invalid_argument("InstanceNorm: channel mismatch");
  const int n = x.h * x.w;
  Tensor out(x.c, x.h, x.w);
  xhat_ = Tensor(x.c, x.h, x.w);
  inv_std_.assign(static_cast<std::size_t>(x.c), 0.f);
  for (int c = 0; c < x.c; ++c) {
    const float* xc = x.v.data() + static_cast<std::size_t>(c) * n;
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += xc[i];
    mean /= n;
    double var = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = xc[i] - mean;
      var += d * d;
    }
    var /= n;
    const float istd = static_cast<float>(1.0 / std::sqrt(var + eps_));
    inv_std_[static_cast<std::size_t>(c)] = istd;
    float* xh = xhat_.v.data() + static_cast<std::size_t>(c) * n;
    float* oc = out.v.data() + static_cast<std::size_t>(c) * n;
    const float g = gamma_[static_cast<std::size_t>(c)];
    const float b = beta_[static_cast<std::size_t>(c)];
    for (int i = 0; i < n; ++i) {
      xh[i] = (xc[i] - static_cast<float>(mean)) * istd;
      oc[i] = g * xh[i] + b;
    }
  }
  return out;
}

Tensor InstanceNorm::backward(const Tensor& grad_out) {
  if (!grad_out.same_shape(xhat_))
    throw std::invalid_argument("InstanceNorm: gradient shape mismatch");
  const int n = grad_out.h * grad_out.w;
  Tensor grad_in(grad_out.c, grad_out.h, grad_out.w);
  for (int c = 0; c < grad_out.c; ++c) {
    const float* dy = grad_out.v.data() + static_cast<std::size_t>(c) * n;
    const float* xh = xhat_.v.data() + static_cast<std::size_t>(c) * n;
    double sum_dy = 0.0, sum_dy_xh = 0.0;
    for (int i = 0; i < n; ++i) {
      sum_dy += dy[i];
      sum_dy_xh += static_cast<double>(dy[i]) * xh[i];
    }
    gamma_grad_[static_cast<std::size_t>(c)] += static_cast<float>(sum_dy_xh);
    beta_grad_[static_cast<std::size_t>(c)] += static_cast<float>(sum_dy);
    const float g = gamma_[static_cast<std::size_t>(c)];
    const float istd = inv_std_[static_cast<std::size_t>(c)];
    const float mean_dy = static_cast<float>(sum_dy / n);
    const float mean_dy_xh = static_cast<float>(sum_dy_xh / n);
    float* dx = grad_in.v.data() + static_cast<std::size_t>(c) * n;
    for (int i = 0; i < n; ++i)
      dx[i] = g * istd * (dy[i] - mean_dy - xh[i] * mean_dy_xh);
  }
  return grad_in;
}

std::vector<ParamView> InstanceNorm::params() {
  return {{&gamma_, &gamma_grad_}, {&beta_, &beta_grad_}};
}

// ---------------------------------------------------------------------------
// Activations

Tensor ReLU::forward(const Tensor& x) {
  out_ = x;
  for (float& v : out_.v) v = v > 0.f ? v : 0.f;
  return out_;
}

Tensor ReLU::backward(const Tensor& grad_out) {
  Tensor grad_in = grad_out;
  for (std::size_t i = 0; i < grad_in.v.size(); ++i)
    if (out_.v[i] <= 0.f) grad_in.v[i] = 0.f;
  return grad_in;
}

Tensor LeakyReLU::forward(const Tensor& x) {
  in_ = x;
  Tensor out = x;
  for (float& v : out.v) v = v > 0.f ? v : slope_ * v;
  return out;
}

Tensor LeakyReLU::backward(const Tensor& grad_out) {
  Tensor grad_in = grad_out;
  for (std::size_t i = 0; i < grad_in.v.size(); ++i)
    if (in_.v[i] <= 0.f) grad_in.v[i] *= slope_;
  return grad_in;
}

Tensor Tanh::forward(const Tensor& x) {
  out_ = x;
  for (float& v : out_.v) v = std::tanh(v);
  return out_;
}

Tensor Tanh::backward(const Tensor& grad_out) {
  Tensor grad_in = grad_out;
  for (std::size_t i = 0; i < grad_in.v.size(); ++i)
    grad_in.v[i] *= 1.f - out_.v[i] * out_.v[i];
  return grad_in;
}

Tensor Sigmoid::forward(const Tensor& x) {
  out_ = x;
  for (float& v : out_.v) v = 1.f / (1.f + std::exp(-v));
  return out_;
}

Tensor Sigmoid::backward(const Tensor& grad_out) {
  Tensor grad_in = grad_out;
  for (std::size_t i = 0; i < grad_in.v.size(); ++i)
    grad_in.v[i] *= out_.v[i] * (1.f - out_.v[i]);
  return grad_in;
}

// ---------------------------------------------------------------------------
// Upsample2x

Tensor Upsample2x::forward(const Tensor& x) {
  Tensor out(x.c, x.h * 2, x.w * 2);
  for (int c = 0; c < x.c; ++c)
    for (int y = 0; y < out.h; ++y)
      for (int x2 = 0; x2 < out.w; ++x2)
        out.at(c, y, x2) = x.at(c, y / 2, x2 / 2);
  return out;
}

Tensor Upsample2x::backward(const Tensor& grad_out) {
  if (grad_out.h % 2 != 0 || grad_out.w % 2 != 0)
    throw std::invalid_argument("Upsample2x: odd gradient shape");
  Tensor grad_in(grad_out.c, grad_out.h / 2, grad_out.w / 2);
  for (int c = 0; c < grad_out.c; ++c)
    for (int y = 0; y < grad_out.h; ++y)
      for (int x = 0; x < grad_out.w; ++x)
        grad_in.at(c, y / 2, x / 2) += grad_out.at(c, y, x);
  return grad_in;
}

// ---------------------------------------------------------------------------
// Containers

Tensor Sequential::forward(const Tensor& x) {
  Tensor cur = x;
  for (auto& layer : layers_) cur = layer->forward(cur);
  return cur;
}

Tensor Sequential::backward(const Tensor& grad_out) {
  Tensor cur = grad_out;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it)
    cur = (*it)->backward(cur);
  return cur;
}

std::vector<ParamView> Sequential::params() {
  std::vector<ParamView> all;
  for (auto& layer : layers_)
    for (ParamView p : layer->params()) all.push_back(p);
  return all;
}

Tensor Residual::forward(const Tensor& x) {
  Tensor out = body_.forward(x);
  if (!out.same_shape(x))
    throw std::invalid_argument("Residual: body changed tensor shape");
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += x.v[i];
  return out;
}

Tensor Residual::backward(const Tensor& grad_out) {
  Tensor grad_in = body_.backward(grad_out);
  for (std::size_t i = 0; i < grad_in.v.size(); ++i)
    grad_in.v[i] += grad_out.v[i];
  return grad_in;
}

std::vector<ParamView> Residual::params() { return body_.params(); }

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  if (a.h != b.h || a.w != b.w)
    throw std::invalid_argument("concat_channels: spatial shape mismatch");
  Tensor out(a.c + b.c, a.h, a.w);
  std::copy(a.v.begin(), a.v.end(), out.v.begin());
  std::copy(b.v.begin(), b.v.end(), out.v.begin() + static_cast<long>(a.size()));
  return out;
}

void split_channels(const Tensor& joined, int first_channels, Tensor& grad_a,
                    Tensor& grad_b) {
  if (first_channels < 0 || first_channels > joined.c)
    throw std::invalid_argument("split_channels: bad split point");
  grad_a = Tensor(first_channels, joined.h, joined.w);
  grad_b = Tensor(joined.c - first_channels, joined.h, joined.w);
  std::copy(joined.v.begin(), joined.v.begin() + static_cast<long>(grad_a.size()),
            grad_a.v.begin());
  std::copy(joined.v.begin() + static_cast<long>(grad_a.size()), joined.v.end(),
            grad_b.v.begin());
}

void zero_param_grads(const std::vector<ParamView>& params) {
  for (const ParamView& p : params)
    std::fill(p.grad->begin(), p.grad->end(), 0.f);
}

std::vector<std::vector<float>> snapshot_params(
    const std::vector<ParamView>& params) {
  std::vector<std::vector<float>> snap;
  snap.reserve(params.size());
  for (const ParamView& p : params) snap.push_back(*p.value);
  return snap;
}

void restore_params(const std::vector<ParamView>& params,
                    const std::vector<std::vector<float>>& snapshot) {
  if (params.size() != snapshot.size())
    throw std::invalid_argument("restore_params: snapshot size mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].value->size() != snapshot[i].size())
      throw std::invalid_argument("restore_params: array size mismatch");
    *params[i].value = snapshot[i];
  }
}

}  // namespace villi::nn
