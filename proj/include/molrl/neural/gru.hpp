//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLRL_NEURAL_GRU_HPP_
#define MOLRL_NEURAL_GRU_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "molrl/neural/model.hpp"
#include "molrl/random.hpp"
#include "molrl/tokens.hpp"

namespace molrl {

/// Per-layer hidden activations, hidden x batch.
template <typename Scalar>
using HiddenState = std::vector<Matrix<Scalar>>;

template <typename Scalar>
HiddenState<Scalar> zero_state(const ModelDims &dims, int batch = 1) {
  return HiddenState<Scalar>(dims.layers,
                             Matrix<Scalar>::Zero(dims.hidden, batch));
}

template <typename Scalar>
struct StepOutput {
  Matrix<Scalar> logits;  // vocab x batch
  HiddenState<Scalar> next;
};

/// Log-softmax of one logit column, evaluated in double whatever the
/// model scalar is, so sampling and likelihood share one code path.
template <typename Derived>
Eigen::VectorXd log_softmax(const Eigen::MatrixBase<Derived> &logits) {
  Eigen::VectorXd x = logits.template cast<double>();
  const double m = x.maxCoeff();
  const double lse = m + std::log((x.array() - m).exp().sum());
  return x.array() - lse;
}

namespace detail {

template <typename Scalar>
struct LayerCache {
  Matrix<Scalar> input, h_prev, z, r, n, rh;
};

template <typename Scalar>
Matrix<Scalar> sigmoid(const Matrix<Scalar> &a) {
  return (Scalar(1) / (Scalar(1) + (-a.array()).exp())).matrix();
}

template <typename Scalar>
void check_step_inputs(const ModelParams<Scalar> &p,
                       std::span<const int> tokens,
                       const HiddenState<Scalar> &state) {
  if (static_cast<int>(state.size()) != p.dims.layers)
    throw std::invalid_argument("shape mismatch: hidden state layers");
  for (const auto &h : state)
    if (h.rows() != p.dims.hidden ||
        h.cols() != static_cast<Eigen::Index>(tokens.size()))
      throw std::invalid_argument("shape mismatch: hidden state");
  for (int t : tokens)
    if (t < 0 || t >= p.dims.vocab)
      throw std::invalid_argument("token id out of range");
}

// One recurrence step for a batch of columns. `state` is advanced in
// place; per-layer activations are appended to `cache` when given.
template <typename Scalar>
void advance(const ModelParams<Scalar> &p, std::span<const int> tokens,
             HiddenState<Scalar> &state, Matrix<Scalar> &logits,
             std::vector<LayerCache<Scalar>> *cache) {
  const Eigen::Index hdim = p.dims.hidden;
  const Eigen::Index batch = static_cast<Eigen::Index>(tokens.size());
  Matrix<Scalar> x(p.dims.embed, batch);
  for (Eigen::Index b = 0; b < batch; ++b)
    x.col(b) = p.embedding.row(tokens[b]).transpose();

  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const GruLayer<Scalar> &layer = p.layers[l];
    Matrix<Scalar> &h = state[l];
    Matrix<Scalar> gx = layer.w_input * x;
    gx.colwise() += layer.bias.col(0);
    Matrix<Scalar> gh = layer.w_hidden.topRows(2 * hdim) * h;
    Matrix<Scalar> z = sigmoid<Scalar>(gx.topRows(hdim) + gh.topRows(hdim));
    Matrix<Scalar> r =
        sigmoid<Scalar>(gx.middleRows(hdim, hdim) + gh.bottomRows(hdim));
    Matrix<Scalar> rh = r.cwiseProduct(h);
    Matrix<Scalar> n =
        (gx.bottomRows(hdim) + layer.w_hidden.bottomRows(hdim) * rh)
            .array()
            .tanh()
            .matrix();
    Matrix<Scalar> h_next =
        ((Scalar(1) - z.array()) * n.array() + z.array() * h.array())
            .matrix();
    if (cache)
      cache->push_back({std::move(x), std::move(h), std::move(z),
                        std::move(r), std::move(n), std::move(rh)});
    h = std::move(h_next);
    x = h;
  }
  logits = p.out_weight * state.back();
  logits.colwise() += p.out_bias.col(0);
}

inline int max_length(std::span<const TokenSequence> batch) {
  int m = 0;
  for (const auto &s : batch) m = std::max(m, s.length);
  return m;
}

template <typename Scalar>
void check_batch(const ModelParams<Scalar> &p,
                 std::span<const TokenSequence> batch) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  for (const auto &s : batch) {
    if (s.length < 1 || s.length > static_cast<int>(s.ids.size()))
      throw std::invalid_argument("malformed token sequence");
    for (int t : s.ids)
      if (t < 0 || t >= p.dims.vocab)
        throw std::invalid_argument("token id out of range");
  }
}

}  // namespace detail

/// Batched step: one token per column of the hidden state.
template <typename Scalar>
StepOutput<Scalar> forward_step(const ModelParams<Scalar> &p,
                                std::span<const int> tokens,
                                const HiddenState<Scalar> &state) {
  detail::check_step_inputs(p, tokens, state);
  StepOutput<Scalar> out{Matrix<Scalar>(), state};
  detail::advance(p, tokens, out.next, out.logits,
                  static_cast<std::vector<detail::LayerCache<Scalar>> *>(
                      nullptr));
  return out;
}

template <typename Scalar>
StepOutput<Scalar> forward_step(const ModelParams<Scalar> &p, int token,
                                const HiddenState<Scalar> &state) {
  const int tokens[1] = {token};
  return forward_step(p, std::span<const int>(tokens), state);
}

/// Negative log-likelihood of each sequence, summed over its logical
/// length. Padding never enters the sum.
template <typename Scalar>
std::vector<double> batch_nll(const ModelParams<Scalar> &p,
                              std::span<const TokenSequence> batch) {
  detail::check_batch(p, batch);
  const int steps = detail::max_length(batch) - 1;
  const std::size_t n = batch.size();
  std::vector<double> nll(n, 0.0);
  HiddenState<Scalar> state = zero_state<Scalar>(p.dims, static_cast<int>(n));
  std::vector<int> tokens(n);
  Matrix<Scalar> logits;
  for (int t = 0; t < steps; ++t) {
    for (std::size_t b = 0; b < n; ++b) tokens[b] = batch[b].ids[t];
    detail::advance(p, std::span<const int>(tokens), state, logits,
                    static_cast<std::vector<detail::LayerCache<Scalar>> *>(
                        nullptr));
    for (std::size_t b = 0; b < n; ++b) {
      if (t + 1 >= batch[b].length) continue;
      const Eigen::VectorXd lp = log_softmax(logits.col(b));
      nll[b] -= lp(batch[b].ids[t + 1]);
    }
  }
  return nll;
}

template <typename Scalar>
double sequence_nll(const ModelParams<Scalar> &p, const TokenSequence &seq) {
  return batch_nll(p, std::span<const TokenSequence>(&seq, 1)).front();
}

struct SamplerConfig {
  int start_id = 1;
  int end_id = 2;
  int max_len = kMaxSequenceLength;
  double temperature = 1.0;
};

struct SampleResult {
  TokenSequence sequence;
  // Model log-probability of each drawn token (temperature 1).
  std::vector<double> log_probs;
  bool terminated = false;
};

/// Draws one sequence per seed, all columns advanced together. Finished
/// columns are fed the pad token, exactly as batch_nll feeds the padded
/// tail, so a batch scored by batch_nll sees identical arithmetic.
template <typename Scalar>
std::vector<SampleResult> sample_batch(const ModelParams<Scalar> &p,
                                       std::span<const std::uint64_t> seeds,
                                       const SamplerConfig &cfg = {}) {
  if (cfg.max_len < 1 || cfg.max_len > kMaxSequenceLength)
    throw std::invalid_argument("max_len out of range");
  if (!(cfg.temperature > 0.0))
    throw std::invalid_argument("temperature must be positive");
  const std::size_t n = seeds.size();
  std::vector<SampleResult> out(n);
  if (n == 0) return out;
  std::vector<Rng> rngs;
  rngs.reserve(n);
  for (auto s : seeds) rngs.emplace_back(s);
  std::vector<int> tokens(n, cfg.start_id);
  std::vector<bool> done(n, false);
  for (auto &r : out) {
    r.sequence.ids[0] = cfg.start_id;
    r.sequence.length = 1;
  }
  HiddenState<Scalar> state = zero_state<Scalar>(p.dims, static_cast<int>(n));
  Matrix<Scalar> logits;
  std::size_t remaining = n;
  for (int t = 1; t < cfg.max_len && remaining > 0; ++t) {
    detail::advance(p, std::span<const int>(tokens), state, logits,
                    static_cast<std::vector<detail::LayerCache<Scalar>> *>(
                        nullptr));
    for (std::size_t b = 0; b < n; ++b) {
      if (done[b]) {
        tokens[b] = 0;
        continue;
      }
      const Eigen::VectorXd lp = log_softmax(logits.col(b));
      Eigen::VectorXd prob = cfg.temperature == 1.0
                                 ? Eigen::VectorXd(lp.array().exp())
                                 : Eigen::VectorXd(log_softmax(
                                       lp / cfg.temperature).array().exp());
      const double u = uniform01(rngs[b]);
      int pick = -1;
      double cum = 0.0;
      for (Eigen::Index i = 0; i < prob.size(); ++i) {
        if (prob(i) <= 0.0) continue;
        cum += prob(i);
        pick = static_cast<int>(i);
        if (u < cum) break;
      }
      SampleResult &r = out[b];
      r.sequence.ids[t] = pick;
      r.sequence.length = t + 1;
      r.log_probs.push_back(lp(pick));
      tokens[b] = pick;
      if (pick == cfg.end_id) {
        r.terminated = true;
        done[b] = true;
        --remaining;
      }
    }
  }
  return out;
}

template <typename Scalar>
SampleResult sample(const ModelParams<Scalar> &p, std::uint64_t seed,
                    const SamplerConfig &cfg = {}) {
  return sample_batch(p, std::span<const std::uint64_t>(&seed, 1), cfg)
      .front();
}

/// Adds scale * d/dθ Σ_b weight_b · nll_b into `grad` (which must have the
/// layout of `p`) and returns Σ_b weight_b · nll_b. Empty `weights` means
/// all ones.
template <typename Scalar>
double accumulate_nll_gradient(const ModelParams<Scalar> &p,
                               std::span<const TokenSequence> batch,
                               std::span<const double> weights, double scale,
                               ModelParams<Scalar> &grad) {
  detail::check_batch(p, batch);
  if (!weights.empty() && weights.size() != batch.size())
    throw std::invalid_argument("weight count does not match batch");
  const int steps = detail::max_length(batch) - 1;
  const Eigen::Index n = static_cast<Eigen::Index>(batch.size());
  const Eigen::Index hdim = p.dims.hidden;
  const std::size_t nl = p.layers.size();
  auto weight = [&](Eigen::Index b) {
    return weights.empty() ? 1.0 : weights[b];
  };

  std::vector<std::vector<detail::LayerCache<Scalar>>> caches(
      std::max(steps, 0));
  std::vector<Matrix<Scalar>> top(std::max(steps, 0));
  std::vector<Matrix<Scalar>> dlogits(std::max(steps, 0));
  std::vector<std::vector<int>> inputs(std::max(steps, 0),
                                       std::vector<int>(n));
  HiddenState<Scalar> state = zero_state<Scalar>(p.dims, static_cast<int>(n));
  Matrix<Scalar> logits;
  double total = 0.0;

  for (int t = 0; t < steps; ++t) {
    for (Eigen::Index b = 0; b < n; ++b) inputs[t][b] = batch[b].ids[t];
    caches[t].reserve(nl);
    detail::advance(p, std::span<const int>(inputs[t]), state, logits,
                    &caches[t]);
    top[t] = state.back();
    Matrix<Scalar> d = Matrix<Scalar>::Zero(p.dims.vocab, n);
    for (Eigen::Index b = 0; b < n; ++b) {
      if (t + 1 >= batch[b].length) continue;
      const int target = batch[b].ids[t + 1];
      const Eigen::VectorXd lp = log_softmax(logits.col(b));
      total -= weight(b) * lp(target);
      const double c = weight(b) * scale;
      if (c == 0.0) continue;
      Eigen::VectorXd g = lp.array().exp();
      g(target) -= 1.0;
      d.col(b) = (c * g).template cast<Scalar>();
    }
    dlogits[t] = std::move(d);
  }

  std::vector<Matrix<Scalar>> dh_next(nl, Matrix<Scalar>::Zero(hdim, n));
  for (int t = steps - 1; t >= 0; --t) {
    grad.out_weight.noalias() += dlogits[t] * top[t].transpose();
    grad.out_bias.col(0) += dlogits[t].rowwise().sum();
    Matrix<Scalar> dh = p.out_weight.transpose() * dlogits[t];
    for (std::size_t li = nl; li-- > 0;) {
      const GruLayer<Scalar> &layer = p.layers[li];
      GruLayer<Scalar> &gl = grad.layers[li];
      const detail::LayerCache<Scalar> &c = caches[t][li];
      dh += dh_next[li];
      const auto z = c.z.array();
      const auto r = c.r.array();
      const auto nn = c.n.array();
      const auto hp = c.h_prev.array();
      Matrix<Scalar> da(3 * hdim, n);
      // update and candidate gates
      da.topRows(hdim) = (dh.array() * (hp - nn) * z * (Scalar(1) - z));
      da.bottomRows(hdim) =
          (dh.array() * (Scalar(1) - z) * (Scalar(1) - nn * nn));
      Matrix<Scalar> drh =
          layer.w_hidden.bottomRows(hdim).transpose() * da.bottomRows(hdim);
      da.middleRows(hdim, hdim) =
          (drh.array() * hp * r * (Scalar(1) - r));
      Matrix<Scalar> dh_prev = (dh.array() * z + drh.array() * r).matrix();
      dh_prev.noalias() +=
          layer.w_hidden.topRows(2 * hdim).transpose() * da.topRows(2 * hdim);
      gl.w_input.noalias() += da * c.input.transpose();
      gl.bias.col(0) += da.rowwise().sum();
      gl.w_hidden.topRows(2 * hdim).noalias() +=
          da.topRows(2 * hdim) * c.h_prev.transpose();
      gl.w_hidden.bottomRows(hdim).noalias() +=
          da.bottomRows(hdim) * c.rh.transpose();
      Matrix<Scalar> dx = layer.w_input.transpose() * da;
      dh_next[li] = std::move(dh_prev);
      if (li > 0) {
        dh = std::move(dx);
      } else {
        for (Eigen::Index b = 0; b < n; ++b)
          grad.embedding.row(inputs[t][b]) += dx.col(b).transpose();
      }
    }
  }
  return total;
}

template <typename Scalar>
struct NllGradient {
  ModelParams<Scalar> grad;
  double loss = 0.0;  // mean weighted sequence NLL
};

/// Exact gradient of the batch-mean (optionally weighted) sequence NLL.
template <typename Scalar>
NllGradient<Scalar> backprop_nll(const ModelParams<Scalar> &p,
                                 std::span<const TokenSequence> batch,
                                 std::span<const double> weights = {}) {
  NllGradient<Scalar> out{zero_params<Scalar>(p.dims), 0.0};
  const double inv = 1.0 / static_cast<double>(batch.size());
  out.loss = accumulate_nll_gradient(p, batch, weights, inv, out.grad) * inv;
  return out;
}

}  // namespace molrl

#endif  // MOLRL_NEURAL_GRU_HPP_
