//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLRL_NEURAL_RMSPROP_HPP_
#define MOLRL_NEURAL_RMSPROP_HPP_

#include <string>

#include "molrl/error.hpp"
#include "molrl/neural/model.hpp"

namespace molrl {

enum class UpdateDirection { kDescent, kAscent };

struct RmspropConfig {
  double learning_rate = 1e-3;
  double decay = 0.9;
  double epsilon = 1e-8;
  double clip = 3.0;
};

template <typename Scalar>
struct OptimizerState {
  RmspropConfig config;
  ModelParams<Scalar> mean_square;

  static OptimizerState make(const ModelDims &dims,
                             const RmspropConfig &cfg = {}) {
    return {cfg, zero_params<Scalar>(dims)};
  }
};

/// Clips each raw gradient entry to [-clip, clip], folds its square into
/// the running mean and steps by lr * g / sqrt(ms + eps).
template <typename Scalar>
void rmsprop_update(ModelParams<Scalar> &p, const ModelParams<Scalar> &grad,
                    OptimizerState<Scalar> &state,
                    UpdateDirection direction = UpdateDirection::kDescent) {
  check_shapes(grad);
  if (!(grad.dims == p.dims) || !(state.mean_square.dims == p.dims))
    throw std::invalid_argument("shape mismatch in optimizer update");
  if (!all_finite(grad)) throw NonFiniteGradient("non-finite gradient");
  const RmspropConfig &c = state.config;
  const Scalar clip = static_cast<Scalar>(c.clip);
  const Scalar decay = static_cast<Scalar>(c.decay);
  const Scalar eps = static_cast<Scalar>(c.epsilon);
  const Scalar lr = static_cast<Scalar>(
      direction == UpdateDirection::kDescent ? -c.learning_rate
                                             : c.learning_rate);
  auto step = [&](auto &param, auto &ms, const auto &g) {
    const auto clipped = g.array().min(clip).max(-clip).eval();
    ms.array() = decay * ms.array() + (Scalar(1) - decay) * clipped.square();
    param.array() += lr * clipped / (ms.array() + eps).sqrt();
  };
  step(p.embedding, state.mean_square.embedding, grad.embedding);
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    step(p.layers[l].w_input, state.mean_square.layers[l].w_input,
         grad.layers[l].w_input);
    step(p.layers[l].w_hidden, state.mean_square.layers[l].w_hidden,
         grad.layers[l].w_hidden);
    step(p.layers[l].bias, state.mean_square.layers[l].bias,
         grad.layers[l].bias);
  }
  step(p.out_weight, state.mean_square.out_weight, grad.out_weight);
  step(p.out_bias, state.mean_square.out_bias, grad.out_bias);
}

}  // namespace molrl

#endif  // MOLRL_NEURAL_RMSPROP_HPP_
