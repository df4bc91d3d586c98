//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLRL_CURRICULUM_HPP_
#define MOLRL_CURRICULUM_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "molrl/neural/model.hpp"
#include "molrl/rl.hpp"
#include "molrl/tokens.hpp"

namespace molrl {

/// Maps per-constraint scores of one molecule to a training score.
using ScoreFn = std::function<double(const ConstraintScores &)>;

// ------------------------------------------------------------ difficulty

struct DifficultyReport {
  std::vector<int> fg_ids;          // spec order
  std::vector<double> difficulty;   // mean fg score in [-1, 1]
  double mw_difficulty = 0;         // mean MW score, informational
  int samples = 0;

  /// Satisfaction probability (difficulty + 1) / 2.
  double probability(std::size_t j) const {
    return (difficulty[j] + 1.0) / 2.0;
  }
};

/// Mean satisfaction of each fg constraint over n prior samples; invalid
/// samples count as violating everything.
DifficultyReport difficulty_scores(const ModelParams<float> &prior,
                                   const Vocabulary &vocab,
                                   const ConstraintSpec &spec, int n,
                                   std::uint64_t seed, int workers = 1);

DifficultyReport difficulty_from_scores(
    const std::vector<ConstraintScores> &scores, const ConstraintSpec &spec);

/// Fg ids sorted by difficulty descending (easiest first, ties by id) and
/// cut into n_bins contiguous bins whose sizes differ by at most one, the
/// larger bins first.
std::vector<std::vector<int>> make_bins(const DifficultyReport &report,
                                        int n_bins);

// ------------------------------------------------------------ plans

enum class Method { kBaseline, kRF, kCF, kCRF };

std::string method_name(Method m);
Method parse_method(std::string_view name);

enum class BaselineReward {
  kEqual,         // mean of all 1+n components
  kBetaWeighted,  // beta * mw + (1 - beta) * fg mean
};

struct PhasePlan {
  Method method = Method::kBaseline;
  int n_bins = 1;
  int phases = 1;
  int retrains_per_phase = 0;
  double w = 0.5;
  double beta = 0.5;
  int budget = 2000;  // iterations per training loop
  int patience = 50;
  std::uint64_t seed = 0;
  BaselineReward baseline_reward = BaselineReward::kEqual;
  std::vector<std::vector<int>> bins;  // filled from a difficulty report

  /// The standard plan for a method and n (n is ignored for Baseline).
  static PhasePlan preset(Method method, int n);

  /// Checks method / bins / phases / retrains against the standard plans.
  void validate() const;

  /// Key-value text: method, n_bins, phases, retrains_per_phase, w, beta,
  /// budget, patience, seed, baseline_reward. Missing keys keep the
  /// standard defaults for the method.
  static PhasePlan parse(std::string_view text);
  static PhasePlan load(const std::filesystem::path &path);
  std::string to_text() const;
};

// ------------------------------------------------------------ rewards

/// Mixture of bins 1..k for phase k (1-based) followed by the beta weighting.
/// Throws std::out_of_range for k outside 1..bins.size().
ScoreFn phase_constraint_fn(const std::vector<std::vector<int>> &bins, int k,
                            double w, double beta, const ConstraintSpec &spec);

ScoreFn baseline_fn(BaselineReward kind, double beta);

/// Mean of the MW score, the weak-set fg mean and the remaining fg mean.
/// Throws std::invalid_argument on an empty weak set.
ScoreFn refined_constraint_fn(const ConstraintSpec &spec,
                              const std::set<int> &weak);

// ------------------------------------------------------------ scheduler

struct IterationRecord {
  int phase = 0;  // 1-based; 0 for the refinement pass
  int pass = 0;   // 0 = main loop, 1 = retrain
  int iteration = 0;
  double mean_reward = 0;  // mean training constraint score
  double mean_return = 0;
  double mean_kl = 0;
  double validity = 0;
  std::vector<double> satisfaction;  // MW then fg, each (mean + 1) / 2
};

std::string format_iteration(const IterationRecord &r);

struct PhaseBoundary {
  int phase = 0;
  int iterations = 0;
  ModelParams<float> checkpoint;
};

struct CurriculumResult {
  ModelParams<float> agent;
  ModelParams<float> prior;  // synchronized copy
  std::vector<IterationRecord> log;
  std::vector<PhaseBoundary> boundaries;
};

struct CurriculumContext {
  const Vocabulary &vocab;
  const ConstraintSpec &spec;
  RlConfig rl;
  RmspropConfig optimizer;
  std::function<void(const IterationRecord &)> on_iteration;
};

CurriculumResult run_curriculum(const PhasePlan &plan,
                                const ModelParams<float> &prior,
                                const CurriculumContext &ctx);

/// One early-stopped loop from `agent` against a fixed reward; the phase
/// scheduler and the refinement pass are built from it.
std::vector<IterationRecord> train_loop(RlState &state,
                                        const ModelParams<float> &prior,
                                        const ScoreFn &fn, int budget,
                                        int patience, int phase, int pass,
                                        const CurriculumContext &ctx);

// ------------------------------------------------------------ refinement

struct WeakReport {
  std::vector<int> fg_ids;
  std::vector<double> satisfaction;  // q_i = (mean score + 1) / 2
  std::set<int> weak;
};

WeakReport detect_weak_constraints(const ModelParams<float> &agent,
                                   const Vocabulary &vocab,
                                   const ConstraintSpec &spec, double xi,
                                   int n, std::uint64_t seed,
                                   int workers = 1);

/// Refinement pass: prior <- agent, then one early-stopped loop against
/// refined_constraint_fn.
CurriculumResult refine(const ModelParams<float> &agent,
                        const std::set<int> &weak, const PhasePlan &plan,
                        const CurriculumContext &ctx);

}  // namespace molrl

#endif  // MOLRL_CURRICULUM_HPP_
