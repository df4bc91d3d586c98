//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLRL_NEURAL_MODEL_HPP_
#define MOLRL_NEURAL_MODEL_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "molrl/random.hpp"

namespace molrl {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

struct ModelDims {
  int vocab = 0;
  int embed = 64;
  int hidden = 128;
  int layers = 1;

  bool operator==(const ModelDims &) const = default;
};

/// One gated recurrent layer. Gate blocks are stacked row-wise in the
/// order update (z), reset (r), candidate (n):
///   z = sigmoid(Wz x + Uz h + bz)
///   r = sigmoid(Wr x + Ur h + br)
///   n = tanh(Wn x + Un (r * h) + bn)
///   h' = (1 - z) * n + z * h
template <typename Scalar>
struct GruLayer {
  Matrix<Scalar> w_input;   // 3H x in
  Matrix<Scalar> w_hidden;  // 3H x H
  Matrix<Scalar> bias;      // 3H x 1
};

/// Embedding, stacked GRU layers and the output projection.
template <typename Scalar>
struct ModelParams {
  ModelDims dims;
  Matrix<Scalar> embedding;   // vocab x embed, one row per token
  std::vector<GruLayer<Scalar>> layers;
  Matrix<Scalar> out_weight;  // vocab x hidden
  Matrix<Scalar> out_bias;    // vocab x 1
};

/// Visits every parameter array with a stable name, in a fixed order.
template <typename Params, typename F>
void for_each_array(Params &p, F &&f) {
  f(std::string("embedding"), p.embedding);
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const std::string prefix = "gru." + std::to_string(l) + ".";
    f(prefix + "w_input", p.layers[l].w_input);
    f(prefix + "w_hidden", p.layers[l].w_hidden);
    f(prefix + "bias", p.layers[l].bias);
  }
  f(std::string("out.weight"), p.out_weight);
  f(std::string("out.bias"), p.out_bias);
}

/// Paired traversal of two parameter sets with identical layout.
template <typename P1, typename P2, typename F>
void for_each_array_pair(P1 &a, P2 &b, F &&f) {
  f(a.embedding, b.embedding);
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    f(a.layers[l].w_input, b.layers[l].w_input);
    f(a.layers[l].w_hidden, b.layers[l].w_hidden);
    f(a.layers[l].bias, b.layers[l].bias);
  }
  f(a.out_weight, b.out_weight);
  f(a.out_bias, b.out_bias);
}

template <typename Scalar>
ModelParams<Scalar> zero_params(const ModelDims &dims) {
  if (dims.vocab <= 0 || dims.embed <= 0 || dims.hidden <= 0 ||
      dims.layers <= 0)
    throw std::invalid_argument("model dimensions must be positive");
  ModelParams<Scalar> p;
  p.dims = dims;
  const int h = dims.hidden;
  p.embedding = Matrix<Scalar>::Zero(dims.vocab, dims.embed);
  for (int l = 0; l < dims.layers; ++l) {
    const int in = l == 0 ? dims.embed : h;
    p.layers.push_back({Matrix<Scalar>::Zero(3 * h, in),
                        Matrix<Scalar>::Zero(3 * h, h),
                        Matrix<Scalar>::Zero(3 * h, 1)});
  }
  p.out_weight = Matrix<Scalar>::Zero(dims.vocab, h);
  p.out_bias = Matrix<Scalar>::Zero(dims.vocab, 1);
  return p;
}

/// Uniform(-1/sqrt(H), 1/sqrt(H)) for recurrent and output weights,
/// Uniform(-1, 1) for the embedding.
template <typename Scalar>
ModelParams<Scalar> init_params(const ModelDims &dims, std::uint64_t seed) {
  ModelParams<Scalar> p = zero_params<Scalar>(dims);
  Rng rng(seed);
  const double k = 1.0 / std::sqrt(static_cast<double>(dims.hidden));
  auto fill = [&rng](Matrix<Scalar> &m, double bound) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        m(i, j) = static_cast<Scalar>((2.0 * uniform01(rng) - 1.0) * bound);
  };
  fill(p.embedding, 1.0);
  for (auto &layer : p.layers) {
    fill(layer.w_input, k);
    fill(layer.w_hidden, k);
    fill(layer.bias, k);
  }
  fill(p.out_weight, k);
  fill(p.out_bias, k);
  return p;
}

/// Deep copy. ModelParams has value semantics, so this is a plain copy;
/// the named function marks the prior/agent hand-offs at call sites.
template <typename Scalar>
ModelParams<Scalar> clone_params(const ModelParams<Scalar> &p) {
  return p;
}

template <typename NewScalar, typename Scalar>
ModelParams<NewScalar> cast_params(const ModelParams<Scalar> &p) {
  ModelParams<NewScalar> out = zero_params<NewScalar>(p.dims);
  for_each_array_pair(out, p, [](auto &dst, const auto &src) {
    dst = src.template cast<NewScalar>();
  });
  return out;
}

template <typename Scalar>
bool all_finite(const ModelParams<Scalar> &p) {
  bool ok = true;
  for_each_array(p, [&ok](const std::string &, const auto &m) {
    ok = ok && m.allFinite();
  });
  return ok;
}

template <typename Scalar>
bool same_values(const ModelParams<Scalar> &a, const ModelParams<Scalar> &b) {
  if (!(a.dims == b.dims)) return false;
  bool eq = true;
  for_each_array_pair(a, b, [&eq](const auto &x, const auto &y) {
    eq = eq && x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  });
  return eq;
}

template <typename Scalar>
void check_shapes(const ModelParams<Scalar> &p) {
  const ModelDims &d = p.dims;
  auto expect = [](const auto &m, Eigen::Index r, Eigen::Index c,
                   const char *what) {
    if (m.rows() != r || m.cols() != c)
      throw std::invalid_argument(std::string("shape mismatch in ") + what);
  };
  expect(p.embedding, d.vocab, d.embed, "embedding");
  if (static_cast<int>(p.layers.size()) != d.layers)
    throw std::invalid_argument("shape mismatch: layer count");
  for (int l = 0; l < d.layers; ++l) {
    const int in = l == 0 ? d.embed : d.hidden;
    expect(p.layers[l].w_input, 3 * d.hidden, in, "gru input weight");
    expect(p.layers[l].w_hidden, 3 * d.hidden, d.hidden, "gru hidden weight");
    expect(p.layers[l].bias, 3 * d.hidden, 1, "gru bias");
  }
  expect(p.out_weight, d.vocab, d.hidden, "output weight");
  expect(p.out_bias, d.vocab, 1, "output bias");
}

}  // namespace molrl

#endif  // MOLRL_NEURAL_MODEL_HPP_
