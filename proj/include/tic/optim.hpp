#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tic/errors.hpp"

namespace tic {

// Optimizers work on flat parameter/gradient spans; a model exposes its
// parameter blocks via visit_params and the trainer walks them in a fixed
// order, so updates are deterministic.

struct SgdConfig {
  double lr = 0.01;
  double momentum = 0.0;
  double weight_decay = 0.0;
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
};

template <typename T>
void check_grads_finite(std::span<const T> grad, const std::string& block) {
  for (T g : grad)
    if (!std::isfinite(double(g)))
      throw NumericError("non-finite gradient in parameter block '" + block + "'");
}

// One SGD step on a single block; velocity must persist across steps when
// momentum > 0 (same length as the block, zero-initialized).
template <typename T>
void sgd_step(std::span<T> param, std::span<const T> grad, const SgdConfig& cfg,
              std::span<T> velocity = {}, const std::string& block = "") {
  check_config(cfg.lr > 0.0, "sgd_step: learning rate must be > 0");
  check_dim(param.size() == grad.size(), "sgd_step: param/grad size mismatch");
  check_grads_finite(grad, block);
  const bool use_momentum = cfg.momentum != 0.0;
  if (use_momentum)
    check_dim(velocity.size() == param.size(), "sgd_step: velocity size mismatch");
  for (std::size_t i = 0; i < param.size(); ++i) {
    T g = grad[i] + T(cfg.weight_decay) * param[i];
    if (use_momentum) {
      velocity[i] = T(cfg.momentum) * velocity[i] + g;
      g = velocity[i];
    }
    param[i] -= T(cfg.lr) * g;
  }
}

template <typename T>
struct AdamState {
  std::vector<T> m;
  std::vector<T> v;
};

// One Adam step on a single block. `t` is the 1-based global step count used
// for bias correction.
template <typename T>
void adam_step(std::span<T> param, std::span<const T> grad, AdamState<T>& state,
               long t, const AdamConfig& cfg, const std::string& block = "") {
  check_config(cfg.lr > 0.0, "adam_step: learning rate must be > 0");
  check_config(t >= 1, "adam_step: step count must be >= 1");
  check_dim(param.size() == grad.size(), "adam_step: param/grad size mismatch");
  check_grads_finite(grad, block);
  if (state.m.empty()) {
    state.m.assign(param.size(), T(0));
    state.v.assign(param.size(), T(0));
  }
  check_dim(state.m.size() == param.size(), "adam_step: state size mismatch");
  const T bc1 = T(1) - T(std::pow(cfg.beta1, double(t)));
  const T bc2 = T(1) - T(std::pow(cfg.beta2, double(t)));
  for (std::size_t i = 0; i < param.size(); ++i) {
    const T g = grad[i] + T(cfg.weight_decay) * param[i];
    state.m[i] = T(cfg.beta1) * state.m[i] + (T(1) - T(cfg.beta1)) * g;
    state.v[i] = T(cfg.beta2) * state.v[i] + (T(1) - T(cfg.beta2)) * g * g;
    const T mhat = state.m[i] / bc1;
    const T vhat = state.v[i] / bc2;
    param[i] -= T(cfg.lr) * mhat / (std::sqrt(vhat) + T(cfg.eps));
  }
}

}  // namespace tic
