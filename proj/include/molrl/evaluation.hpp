//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLRL_EVALUATION_HPP_
#define MOLRL_EVALUATION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "molrl/neural/model.hpp"
#include "molrl/rl.hpp"
#include "molrl/sampling.hpp"
#include "molrl/tokens.hpp"

namespace molrl {

struct RankedSample {
  std::string smiles;  // raw token text when the sample is invalid
  bool valid = false;
  double total = 0;
  ConstraintScores scores;
  std::optional<double> similarity;
};

struct EvaluationReport {
  std::vector<RankedSample> samples;  // every draw, in sampling order
  std::vector<RankedSample> top;      // best k, see rank_samples
  double validity = 0;
  double uniqueness = 0;  // distinct valid SMILES over valid samples
  std::optional<std::string> target;

  double top_mean() const;
  /// Some top-k candidate has similarity exactly 1.
  bool identified() const;
};

/// Scores molecules with eval_total and keeps the best k, ordered by total
/// descending, valid before invalid, then SMILES ascending.
EvaluationReport rank_samples(const std::vector<Molecule> &molecules,
                              const ConstraintSpec &spec, int k);

EvaluationReport sample_and_rank(const ModelParams<float> &agent,
                                 const Vocabulary &vocab,
                                 const ConstraintSpec &spec, int n, int k,
                                 std::uint64_t seed, int workers = 1);

/// Attaches Tanimoto similarity to the target for every top-k entry.
/// Throws DataError when the target is not a valid SMILES.
void similarity_report(EvaluationReport &report, const std::string &target);

/// Human-readable summary followed by a `# ranking` section with one
/// tab-separated row per top-k entry: rank, smiles, total, mw score, the
/// fg scores in spec order, and the similarity (blank without a target).
std::string format_report(const EvaluationReport &report,
                          const ConstraintSpec &spec);

}  // namespace molrl

#endif  // MOLRL_EVALUATION_HPP_
