//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLRL_RL_HPP_
#define MOLRL_RL_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "molrl/descriptors.hpp"
#include "molrl/mol_graph.hpp"
#include "molrl/neural/gru.hpp"
#include "molrl/neural/rmsprop.hpp"
#include "molrl/sampling.hpp"

namespace molrl {

// ------------------------------------------------------------ constraints

struct FgConstraint {
  int id = 0;
  std::string name;
  bool desired = true;

  bool operator==(const FgConstraint &) const = default;
};

/// Molecular-weight target plus functional-group presence flags. The full
/// problem uses all 20 catalog groups; smaller subsets are accepted.
struct ConstraintSpec {
  double mw_target = 0;
  std::vector<FgConstraint> fg;

  int num_constraints() const { return 1 + static_cast<int>(fg.size()); }

  /// mw_target > 0, 1..20 entries, distinct ids known to the catalog.
  void validate(const FunctionalGroupCatalog &catalog =
                    FunctionalGroupCatalog::builtin()) const;

  /// `mw: <float>` then one `fg <id> <name> <true|false>` line per group.
  static ConstraintSpec parse(std::string_view text,
                              const FunctionalGroupCatalog &catalog =
                                  FunctionalGroupCatalog::builtin());
  static ConstraintSpec load(const std::filesystem::path &path,
                             const FunctionalGroupCatalog &catalog =
                                 FunctionalGroupCatalog::builtin());
  std::string to_text() const;

  bool operator==(const ConstraintSpec &) const = default;
};

/// max(-1, 1 - (x - MW(y))^2 / 1e4).
double score_mw(const MolGraph &y, double mw_target);
double score_mw_value(double mw, double mw_target);

/// +1 when presence matches the desired flag, -1 otherwise.
int score_fg(const MolGraph &y, const FunctionalGroupPattern &pattern,
             bool desired);
/// Throws DataError for ids outside the catalog.
int score_fg(const MolGraph &y, int fg_id, bool desired,
             const FunctionalGroupCatalog &catalog =
                 FunctionalGroupCatalog::builtin());

/// Per-constraint scores in spec order. Invalid molecules score -1 on
/// every component.
struct ConstraintScores {
  double mw = -1;
  std::vector<int> fg;

  int num_constraints() const { return 1 + static_cast<int>(fg.size()); }
  double fg_mean() const;
};

ConstraintScores score_constraints(const std::optional<MolGraph> &y,
                                   const ConstraintSpec &spec,
                                   const FunctionalGroupCatalog &catalog =
                                       FunctionalGroupCatalog::builtin());

/// Decodes a sampled sequence and scores it.
ConstraintScores score_sequence(const TokenSequence &seq,
                                const Vocabulary &vocab,
                                const ConstraintSpec &spec);

/// mw score + sum of fg scores, in [-(1+n), 1+n] (21 for the full spec).
double eval_total(const ConstraintScores &s);
double eval_total(const std::optional<MolGraph> &y, const ConstraintSpec &spec);

/// Equal-weight mean of all 1+n components.
double baseline_constraint(const ConstraintScores &s);
double baseline_constraint(const std::optional<MolGraph> &y,
                           const ConstraintSpec &spec);

/// nll_prior - nll_agent, in nats.
inline double kl_term(double nll_prior, double nll_agent) {
  return nll_prior - nll_agent;
}

// ------------------------------------------------------------ policy step

enum class Estimator {
  kReinforce,  // (R - b) * grad log P_agent
  kReinvent,   // squared distance to log P_prior + sigma * C
};

struct RlConfig {
  int batch_size = 128;
  // Multiplier on kl_term inside the return. Negative values anchor the
  // agent to the prior; positive values reward drifting away from it.
  double kl_weight = -0.1;
  double baseline_decay = 0.99;
  Estimator estimator = Estimator::kReinforce;
  double sigma = 60.0;  // kReinvent only
  int workers = 1;
  SamplerConfig sampler;
};

struct TrajectoryScore {
  double constraint = -1;  // in [-1, 1]
  bool valid = false;
};

/// Called once per trajectory, possibly from several threads at once;
/// `index` is the trajectory's slot in the batch.
using TrajectoryScorer =
    std::function<TrajectoryScore(const SampleResult &, std::size_t index)>;

struct RlState {
  ModelParams<float> agent;
  OptimizerState<float> optimizer;
  std::optional<double> baseline;
  std::uint64_t seed = 0;
  std::uint64_t step = 0;

  static RlState start(const ModelParams<float> &agent, std::uint64_t seed,
                       const RmspropConfig &opt = {});
};

struct BatchStats {
  double mean_return = 0;
  double mean_constraint = 0;
  double mean_kl = 0;
  double validity = 0;
  double baseline = 0;  // value used for this batch
  std::vector<SampleResult> samples;
  std::vector<TrajectoryScore> scores;
  std::vector<double> kl;
};

/// Samples a batch from the agent, scores it, and takes one RMSprop ascent
/// step on the estimator's surrogate. Trajectories are processed in chunks
/// of kTrajectoryChunk whose gradients are summed in chunk order, so the
/// result does not depend on `workers`.
BatchStats reinforce_step(RlState &state, const ModelParams<float> &prior,
                          const TrajectoryScorer &scorer,
                          const RlConfig &config);

}  // namespace molrl

#endif  // MOLRL_RL_HPP_
