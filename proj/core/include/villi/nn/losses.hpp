#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace villi::nn {

// Scalar losses over flat spans, each returning the loss value and writing
// d(loss)/d(pred) into grad. Templated on the scalar type so tests can run
// the identical code path in double precision.

/// Mean squared error against a constant target (least-squares adversarial
/// objective on a score map).
template <typename T>
T mse_const_loss(std::span<const T> pred, T target, std::span<T> grad) {
  if (pred.size() != grad.size())
    throw std::invalid_argument("mse_const_loss: size mismatch");
  const T n = static_cast<T>(pred.size());
  T loss = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const T d = pred[i] - target;
    loss += d * d;
    grad[i] = 2 * d / n;
  }
  return loss / n;
}

/// Mean absolute difference; grad is with respect to `a`.
template <typename T>
T l1_loss(std::span<const T> a, std::span<const T> b, std::span<T> grad) {
  if (a.size() != b.size() || a.size() != grad.size())
    throw std::invalid_argument("l1_loss: size mismatch");
  const T n = static_cast<T>(a.size());
  T loss = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const T d = a[i] - b[i];
    loss += d < 0 ? -d : d;
    grad[i] = (d > 0 ? T(1) : (d < 0 ? T(-1) : T(0))) / n;
  }
  return loss / n;
}

/// Soft Dice loss 1 - (2*sum(p*t) + eps) / (sum(p) + sum(t) + eps); grad is
/// with respect to pred. eps makes the empty/empty case well-defined (-> 0).
template <typename T>
T soft_dice_loss(std::span<const T> pred, std::span<const T> target, T eps,
                 std::span<T> grad) {
  if (pred.size() != target.size() || pred.size() != grad.size())
    throw std::invalid_argument("soft_dice_loss: size mismatch");
  if (eps <= 0) throw std::invalid_argument("soft_dice_loss: eps must be > 0");
  T inter = 0, sum_p = 0, sum_t = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    inter += pred[i] * target[i];
    sum_p += pred[i];
    sum_t += target[i];
  }
  const T num = 2 * inter + eps;
  const T den = sum_p + sum_t + eps;
  for (std::size_t i = 0; i < pred.size(); ++i)
    grad[i] = -(2 * target[i] * den - num) / (den * den);
  return 1 - num / den;
}

/// Numerically stable binary cross-entropy on raw scores against a constant
/// target in {0, 1} (the cross-entropy adversarial objective).
template <typename T>
T bce_logits_const_loss(std::span<const T> logits, T target,
                        std::span<T> grad) {
  if (logits.size() != grad.size())
    throw std::invalid_argument("bce_logits_const_loss: size mismatch");
  const T n = static_cast<T>(logits.size());
  T loss = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const T s = logits[i];
    const T abs_s = s < 0 ? -s : s;
    loss += (s > 0 ? s : T(0)) - s * target + std::log1p(std::exp(-abs_s));
    const T sig = T(1) / (T(1) + std::exp(-s));
    grad[i] = (sig - target) / n;
  }
  return loss / n;
}

}  // namespace villi::nn
