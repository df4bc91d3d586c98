//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molrl/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "molrl/descriptors.hpp"
#include "molrl/error.hpp"
#include "molrl/neural/gru.hpp"
#include "molrl/random.hpp"
#include "molrl/sampling.hpp"
#include "molrl/smiles.hpp"

namespace molrl {

bool ProspectiveFilter::accepts(const MolGraph &g) const {
  for (const Atom &a : g.atoms())
    if (std::find(elements.begin(), elements.end(), a.atomic_number) ==
        elements.end())
      return false;
  return molecular_weight(g) < max_mw;
}

namespace {

std::string first_field(const std::string &line) {
  std::istringstream in(line);
  std::string field;
  in >> field;
  return field;
}

}  // namespace

Corpus ingest_lines(std::span<const std::string> lines,
                    const std::optional<ProspectiveFilter> &filter,
                    std::filesystem::path source) {
  Corpus c;
  c.source = std::move(source);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    ++c.stats.lines;
    const std::string smi = first_field(lines[i]);
    if (smi.empty()) continue;
    auto reject = [&](std::size_t &counter, std::string reason,
                      std::optional<SmilesErrorKind> kind = std::nullopt) {
      ++counter;
      c.diagnostics.push_back({i + 1, smi, std::move(reason), kind});
    };
    MolGraph g;
    try {
      g = parse_smiles(smi);
    } catch (const SmilesError &e) {
      reject(c.stats.invalid, e.what(), e.kind());
      continue;
    } catch (const DataError &e) {
      reject(c.stats.invalid, e.what());
      continue;
    }
    if (g.empty()) {
      reject(c.stats.invalid, "no atoms");
      continue;
    }
    if (filter && !filter->accepts(g)) {
      reject(c.stats.filtered, "outside prospective filter");
      continue;
    }
    try {
      const std::string one[1] = {smi};
      tokenize(smi, Vocabulary::from_corpus(one));
    } catch (const TokenError &e) {
      if (e.kind() == TokenErrorKind::kTooLong)
        reject(c.stats.too_long, e.what());
      else
        reject(c.stats.invalid, e.what());
      continue;
    }
    c.smiles.push_back(smi);
  }
  if (c.smiles.empty()) throw DataError("empty corpus: no line survived");
  c.stats.kept = c.smiles.size();
  c.vocab = Vocabulary::from_corpus(c.smiles);
  c.sequences.reserve(c.smiles.size());
  for (const auto &s : c.smiles) c.sequences.push_back(tokenize(s, c.vocab));
  return c;
}

Corpus ingest(const std::filesystem::path &path,
              const std::optional<ProspectiveFilter> &filter) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return ingest_lines(lines, filter, path);
}

void save_corpus(const std::filesystem::path &path, const Corpus &corpus) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto &s : corpus.smiles) out << s << '\n';
}

void shuffle_indices(std::vector<std::size_t> &v, std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform01(rng) * i);
    std::swap(v[i - 1], v[j]);
  }
}

namespace {

double mean_nll(const ModelParams<float> &p,
                const std::vector<TokenSequence> &seqs,
                const std::vector<std::size_t> &idx, int batch_size) {
  double total = 0;
  for (std::size_t at = 0; at < idx.size(); at += batch_size) {
    std::vector<TokenSequence> batch;
    for (std::size_t k = at; k < std::min(idx.size(), at + batch_size); ++k)
      batch.push_back(seqs[idx[k]]);
    for (double v : batch_nll(p, std::span<const TokenSequence>(batch)))
      total += v;
  }
  return total / static_cast<double>(idx.size());
}

}  // namespace

TrainResult train_prior(const Corpus &corpus, const TrainConfig &cfg,
                        const std::function<void(const EpochRecord &)>
                            &on_epoch) {
  const std::size_t n = corpus.sequences.size();
  if (n == 0) throw DataError("empty corpus");
  if (cfg.batch_size < 1 || cfg.epochs < 0 || cfg.patience < 1 ||
      cfg.heldout_fraction < 0 || cfg.heldout_fraction >= 1 ||
      !(cfg.lr_decay > 0))
    throw std::invalid_argument("bad training configuration");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle_indices(order, derive_seed(cfg.seed, "split"));
  std::size_t n_held = 0;
  if (n >= 2 && cfg.heldout_fraction > 0)
    n_held = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(cfg.heldout_fraction * n)));
  const std::vector<std::size_t> held(order.begin(), order.begin() + n_held);
  std::vector<std::size_t> train(order.begin() + n_held, order.end());

  const ModelDims dims{corpus.vocab.size(), cfg.embed, cfg.hidden,
                       cfg.layers};
  TrainResult result;
  result.params = init_params<float>(dims, derive_seed(cfg.seed, "init"));
  result.train_size = train.size();
  result.heldout_size = held.size();
  auto opt = OptimizerState<float>::make(dims, cfg.optimizer);
  ModelParams<float> p = result.params;
  double best = INFINITY;
  int stale = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle_indices(train, derive_seed(cfg.seed, "shuffle", epoch));
    double sum = 0;
    for (std::size_t at = 0; at < train.size(); at += cfg.batch_size) {
      std::vector<TokenSequence> batch;
      const std::size_t stop = std::min(train.size(), at + cfg.batch_size);
      for (std::size_t k = at; k < stop; ++k)
        batch.push_back(corpus.sequences[train[k]]);
      const auto g = backprop_nll(p, std::span<const TokenSequence>(batch));
      if (!std::isfinite(g.loss))
        throw DivergenceDetected("non-finite training loss in epoch " +
                                 std::to_string(epoch));
      try {
        rmsprop_update(p, g.grad, opt, UpdateDirection::kDescent);
      } catch (const NonFiniteGradient &) {
        throw DivergenceDetected("non-finite gradient in epoch " +
                                 std::to_string(epoch));
      }
      sum += g.loss * static_cast<double>(batch.size());
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_nll = sum / static_cast<double>(train.size());
    rec.heldout_nll = held.empty()
                          ? rec.train_nll
                          : mean_nll(p, corpus.sequences, held, cfg.batch_size);
    if (!std::isfinite(rec.heldout_nll))
      throw DivergenceDetected("non-finite held-out loss in epoch " +
                               std::to_string(epoch));
    rec.validity_sample_rate =
        cfg.validity_samples > 0
            ? validity_rate(p, corpus.vocab, cfg.validity_samples,
                            derive_seed(cfg.seed, "epoch-validity", epoch))
                  .validity()
            : 0.0;
    opt.config.learning_rate *= cfg.lr_decay;
    result.log.push_back(rec);
    if (on_epoch) on_epoch(rec);
    if (rec.heldout_nll < best) {
      best = rec.heldout_nll;
      result.params = p;
      result.best_epoch = epoch;
      stale = 0;
    } else if (++stale >= cfg.patience) {
      result.early_stopped = true;
      break;
    }
  }
  return result;
}

std::string format_epoch(const EpochRecord &r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d, %.6f, %.6f, %.4f", r.epoch, r.train_nll,
                r.heldout_nll, r.validity_sample_rate);
  return buf;
}

ValidityReport validity_rate(const ModelParams<float> &params,
                             const Vocabulary &vocab, int n_samples,
                             std::uint64_t seed, int workers) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  const auto samples =
      sample_many(params, sampler_config(vocab), n_samples, seed, workers);
  ValidityReport r;
  r.samples = n_samples;
  std::set<std::string> seen;
  for (const auto &s : samples) {
    const Molecule m = decode_molecule(s.sequence, vocab);
    if (!m.valid()) continue;
    ++r.valid;
    if (seen.insert(m.smiles).second) ++r.unique_valid;
  }
  return r;
}

}  // namespace molrl
