//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molrl/sampling.hpp"

#include <algorithm>

#include "molrl/error.hpp"
#include "molrl/parallel.hpp"
#include "molrl/random.hpp"
#include "molrl/smiles.hpp"

namespace molrl {

SamplerConfig sampler_config(const Vocabulary &vocab, double temperature) {
  SamplerConfig cfg;
  cfg.start_id = vocab.start();
  cfg.end_id = vocab.end();
  cfg.temperature = temperature;
  return cfg;
}

std::vector<SampleResult> sample_many(const ModelParams<float> &params,
                                      const SamplerConfig &cfg, int n,
                                      std::uint64_t seed, int workers) {
  if (n < 0) throw std::invalid_argument("negative sample count");
  std::vector<SampleResult> out(n);
  const int chunks = (n + kTrajectoryChunk - 1) / kTrajectoryChunk;
  parallel_for(chunks, workers, [&](int c) {
    const int begin = c * kTrajectoryChunk;
    const int end = std::min(n, begin + kTrajectoryChunk);
    std::vector<std::uint64_t> seeds;
    for (int i = begin; i < end; ++i)
      seeds.push_back(derive_seed(seed, "trajectory", i));
    auto part = sample_batch(params, std::span<const std::uint64_t>(seeds), cfg);
    std::move(part.begin(), part.end(), out.begin() + begin);
  });
  return out;
}

Molecule decode_molecule(const TokenSequence &seq, const Vocabulary &vocab) {
  Molecule m;
  try {
    m.smiles = detokenize(seq, vocab);
  } catch (const TokenError &) {
    return m;
  }
  if (m.smiles.empty()) return m;
  try {
    m.graph = parse_smiles(m.smiles);
  } catch (const DataError &) {
  }
  return m;
}

}  // namespace molrl
