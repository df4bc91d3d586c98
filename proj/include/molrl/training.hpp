//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLRL_TRAINING_HPP_
#define MOLRL_TRAINING_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "molrl/error.hpp"
#include "molrl/mol_graph.hpp"
#include "molrl/neural/model.hpp"
#include "molrl/neural/rmsprop.hpp"
#include "molrl/tokens.hpp"

namespace molrl {

/// Low-MW organic subset: MW below the limit, elements C, H and O only.
struct ProspectiveFilter {
  double max_mw = 200.0;
  std::vector<int> elements{1, 6, 8};

  bool accepts(const MolGraph &g) const;
};

struct IngestDiagnostic {
  std::size_t line = 0;  // 1-based
  std::string text;
  std::string reason;
  std::optional<SmilesErrorKind> kind;  // set for parse failures
};

struct IngestStats {
  std::size_t lines = 0;
  std::size_t kept = 0;
  std::size_t invalid = 0;
  std::size_t too_long = 0;
  std::size_t filtered = 0;
};

struct Corpus {
  std::filesystem::path source;
  std::vector<std::string> smiles;
  std::vector<TokenSequence> sequences;
  Vocabulary vocab;
  IngestStats stats;
  std::vector<IngestDiagnostic> diagnostics;
};

/// Keeps lines whose first whitespace-separated field is a non-empty valid
/// SMILES that encodes within kMaxSequenceLength tokens (and passes the
/// filter when given). Blank lines are skipped silently. Throws DataError
/// when nothing survives.
Corpus ingest_lines(std::span<const std::string> lines,
                    const std::optional<ProspectiveFilter> &filter = {},
                    std::filesystem::path source = {});
Corpus ingest(const std::filesystem::path &path,
              const std::optional<ProspectiveFilter> &filter = {});

void save_corpus(const std::filesystem::path &path, const Corpus &corpus);

struct TrainConfig {
  int embed = 64;
  int hidden = 128;
  int layers = 1;
  int epochs = 20;
  int batch_size = 128;
  double heldout_fraction = 0.05;
  int patience = 3;
  int validity_samples = 128;  // per-epoch log column; 0 disables
  RmspropConfig optimizer;
  // learning rate multiplier applied after every epoch
  double lr_decay = 0.9;
  std::uint64_t seed = 0;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_nll = 0;    // mean sequence NLL over the epoch's batches
  double heldout_nll = 0;  // mean sequence NLL on the held-out split
  double validity_sample_rate = 0;
};

struct TrainResult {
  ModelParams<float> params;  // best held-out epoch
  std::vector<EpochRecord> log;
  int best_epoch = 0;
  bool early_stopped = false;
  std::size_t train_size = 0;
  std::size_t heldout_size = 0;
};

/// Shuffled minibatch RMSprop descent on the mean sequence NLL with early
/// stopping on a held-out split. Throws DivergenceDetected on a non-finite
/// loss or gradient.
TrainResult train_prior(const Corpus &corpus, const TrainConfig &config,
                        const std::function<void(const EpochRecord &)>
                            &on_epoch = {});

std::string format_epoch(const EpochRecord &r);

struct ValidityReport {
  int samples = 0;
  int valid = 0;
  int unique_valid = 0;

  double validity() const { return samples ? double(valid) / samples : 0.0; }
  /// Distinct valid SMILES strings over valid samples.
  double uniqueness() const {
    return valid ? double(unique_valid) / valid : 0.0;
  }
};

ValidityReport validity_rate(const ModelParams<float> &params,
                             const Vocabulary &vocab, int n_samples,
                             std::uint64_t seed, int workers = 1);

/// Deterministic Fisher-Yates shuffle driven by uniform01.
void shuffle_indices(std::vector<std::size_t> &v, std::uint64_t seed);

}  // namespace molrl

#endif  // MOLRL_TRAINING_HPP_
