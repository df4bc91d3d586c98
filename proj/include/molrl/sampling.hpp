//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLRL_SAMPLING_HPP_
#define MOLRL_SAMPLING_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "molrl/mol_graph.hpp"
#include "molrl/neural/gru.hpp"
#include "molrl/tokens.hpp"

namespace molrl {

/// Trajectories are generated in fixed-width chunks, so the arithmetic a
/// trajectory sees does not depend on how chunks are spread over workers.
inline constexpr int kTrajectoryChunk = 16;

SamplerConfig sampler_config(const Vocabulary &vocab,
                             double temperature = 1.0);

/// Trajectory i is drawn from derive_seed(seed, "trajectory", i).
std::vector<SampleResult> sample_many(const ModelParams<float> &params,
                                      const SamplerConfig &cfg, int n,
                                      std::uint64_t seed, int workers = 1);

struct Molecule {
  std::string smiles;  // empty when the sequence does not decode
  std::optional<MolGraph> graph;

  bool valid() const { return graph.has_value(); }
};

/// A sample is a valid molecule when it decodes to a SMILES with at least
/// one atom that parses.
Molecule decode_molecule(const TokenSequence &seq, const Vocabulary &vocab);

}  // namespace molrl

#endif  // MOLRL_SAMPLING_HPP_
