//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molrl/rl.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "molrl/error.hpp"
#include "molrl/parallel.hpp"
#include "molrl/random.hpp"

namespace molrl {

// ------------------------------------------------------------ constraints

void ConstraintSpec::validate(const FunctionalGroupCatalog &catalog) const {
  if (!(mw_target > 0) || !std::isfinite(mw_target))
    throw DataError("mw target must be positive");
  if (fg.empty() || fg.size() > FunctionalGroupCatalog::kSize)
    throw DataError("constraint spec needs 1..20 functional groups");
  std::set<int> ids;
  for (const auto &c : fg) {
    if (!catalog.contains(c.id))
      throw DataError("unknown functional group id " + std::to_string(c.id));
    if (!ids.insert(c.id).second)
      throw DataError("duplicate functional group id " + std::to_string(c.id));
  }
}

ConstraintSpec ConstraintSpec::parse(std::string_view text,
                                     const FunctionalGroupCatalog &catalog) {
  ConstraintSpec spec;
  bool have_mw = false;
  std::istringstream in{std::string(text)};
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key)) continue;
    auto fail = [&](const std::string &why) {
      throw DataError("constraint spec line " + std::to_string(lineno) +
                      ": " + why);
    };
    if (key == "mw:") {
      if (have_mw) fail("repeated mw line");
      if (!(fields >> spec.mw_target)) fail("bad mw value");
      have_mw = true;
    } else if (key == "fg") {
      FgConstraint c;
      std::string flag;
      if (!(fields >> c.id >> c.name >> flag)) fail("expected fg <id> <name> <true|false>");
      if (flag == "true") c.desired = true;
      else if (flag == "false") c.desired = false;
      else fail("flag must be true or false");
      if (!catalog.contains(c.id))
        fail("unknown functional group id " + std::to_string(c.id));
      if (catalog.get(c.id).name() != c.name)
        fail("name " + c.name + " does not match group " +
             std::to_string(c.id));
      spec.fg.push_back(std::move(c));
    } else {
      fail("unknown key " + key);
    }
    std::string extra;
    if (fields >> extra) fail("trailing text");
  }
  if (!have_mw) throw DataError("constraint spec has no mw line");
  spec.validate(catalog);
  return spec;
}

ConstraintSpec ConstraintSpec::load(const std::filesystem::path &path,
                                    const FunctionalGroupCatalog &catalog) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), catalog);
}

std::string ConstraintSpec::to_text() const {
  std::ostringstream out;
  out.precision(17);
  out << "mw: " << mw_target << '\n';
  for (const auto &c : fg)
    out << "fg " << c.id << ' ' << c.name << ' '
        << (c.desired ? "true" : "false") << '\n';
  return out.str();
}

double score_mw_value(double mw, double mw_target) {
  const double d = mw_target - mw;
  return std::max(-1.0, 1.0 - d * d / 1e4);
}

double score_mw(const MolGraph &y, double mw_target) {
  return score_mw_value(molecular_weight(y), mw_target);
}

int score_fg(const MolGraph &y, const FunctionalGroupPattern &pattern,
             bool desired) {
  return match_group(y, pattern) == desired ? 1 : -1;
}

int score_fg(const MolGraph &y, int fg_id, bool desired,
             const FunctionalGroupCatalog &catalog) {
  return score_fg(y, catalog.get(fg_id), desired);
}

double ConstraintScores::fg_mean() const {
  double s = 0;
  for (int v : fg) s += v;
  return fg.empty() ? 0.0 : s / static_cast<double>(fg.size());
}

ConstraintScores score_constraints(const std::optional<MolGraph> &y,
                                   const ConstraintSpec &spec,
                                   const FunctionalGroupCatalog &catalog) {
  ConstraintScores s;
  s.fg.assign(spec.fg.size(), -1);
  if (!y || y->empty()) return s;
  s.mw = score_mw(*y, spec.mw_target);
  for (std::size_t i = 0; i < spec.fg.size(); ++i)
    s.fg[i] = score_fg(*y, spec.fg[i].id, spec.fg[i].desired, catalog);
  return s;
}

ConstraintScores score_sequence(const TokenSequence &seq,
                                const Vocabulary &vocab,
                                const ConstraintSpec &spec) {
  return score_constraints(decode_molecule(seq, vocab).graph, spec);
}

double eval_total(const ConstraintScores &s) {
  // (1+n) * baseline rather than the raw sum: identical up to one ulp, and
  // it keeps eval_total == (1+n) * baseline_constraint bit-exact.
  return s.num_constraints() * baseline_constraint(s);
}

double eval_total(const std::optional<MolGraph> &y,
                  const ConstraintSpec &spec) {
  return eval_total(score_constraints(y, spec));
}

double baseline_constraint(const ConstraintScores &s) {
  int fg = 0;
  for (int v : s.fg) fg += v;
  return (s.mw + fg) / s.num_constraints();
}

double baseline_constraint(const std::optional<MolGraph> &y,
                           const ConstraintSpec &spec) {
  return baseline_constraint(score_constraints(y, spec));
}

// ------------------------------------------------------------ policy step

RlState RlState::start(const ModelParams<float> &agent, std::uint64_t seed,
                       const RmspropConfig &opt) {
  return {clone_params(agent), OptimizerState<float>::make(agent.dims, opt),
          std::nullopt, seed, 0};
}

BatchStats reinforce_step(RlState &state, const ModelParams<float> &prior,
                          const TrajectoryScorer &scorer,
                          const RlConfig &cfg) {
  if (!(state.agent.dims == prior.dims))
    throw std::invalid_argument("agent and prior dimensions differ");
  if (cfg.batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  const int n = cfg.batch_size;
  const std::uint64_t step_seed =
      derive_seed(state.seed, "rl-step", state.step);

  BatchStats st;
  st.samples = sample_many(state.agent, cfg.sampler, n, step_seed, cfg.workers);
  st.scores.resize(n);
  st.kl.resize(n);
  std::vector<double> nll_agent(n);

  const int chunks = (n + kTrajectoryChunk - 1) / kTrajectoryChunk;
  auto chunk_batch = [&](int c) {
    std::vector<TokenSequence> seqs;
    for (int i = c * kTrajectoryChunk;
         i < std::min(n, (c + 1) * kTrajectoryChunk); ++i)
      seqs.push_back(st.samples[i].sequence);
    return seqs;
  };

  parallel_for(chunks, cfg.workers, [&](int c) {
    const auto seqs = chunk_batch(c);
    const auto prior_nll =
        batch_nll(prior, std::span<const TokenSequence>(seqs));
    for (std::size_t k = 0; k < seqs.size(); ++k) {
      const std::size_t i = c * kTrajectoryChunk + k;
      double lp = 0;
      for (double v : st.samples[i].log_probs) lp += v;
      nll_agent[i] = -lp;
      st.kl[i] = kl_term(prior_nll[k], nll_agent[i]);
      st.scores[i] = scorer(st.samples[i], i);
    }
  });

  std::vector<double> returns(n);
  double sum_r = 0, sum_c = 0, sum_kl = 0;
  int valid = 0;
  for (int i = 0; i < n; ++i) {
    returns[i] = st.scores[i].constraint + cfg.kl_weight * st.kl[i];
    sum_r += returns[i];
    sum_c += st.scores[i].constraint;
    sum_kl += st.kl[i];
    valid += st.scores[i].valid ? 1 : 0;
  }
  st.mean_return = sum_r / n;
  st.mean_constraint = sum_c / n;
  st.mean_kl = sum_kl / n;
  st.validity = static_cast<double>(valid) / n;
  if (!state.baseline) state.baseline = st.mean_return;
  st.baseline = *state.baseline;

  // With these weights, grad of mean_i w_i * nll_i is the gradient of the
  // surrogate objective.
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    if (cfg.estimator == Estimator::kReinforce) {
      w[i] = -(returns[i] - st.baseline);
    } else {
      const double augmented =
          -(nll_agent[i] + st.kl[i]) + cfg.sigma * st.scores[i].constraint;
      w[i] = 2.0 * (-nll_agent[i] - augmented);
    }
  }

  std::vector<ModelParams<float>> grads(chunks);
  parallel_for(chunks, cfg.workers, [&](int c) {
    const auto seqs = chunk_batch(c);
    grads[c] = zero_params<float>(state.agent.dims);
    const std::span<const double> wc(w.data() + c * kTrajectoryChunk,
                                     seqs.size());
    accumulate_nll_gradient(state.agent, std::span<const TokenSequence>(seqs),
                            wc, 1.0 / n, grads[c]);
  });
  for (int c = 1; c < chunks; ++c)
    for_each_array_pair(grads[0], grads[c],
                        [](auto &acc, const auto &g) { acc += g; });
  rmsprop_update(state.agent, grads[0], state.optimizer,
                 UpdateDirection::kAscent);

  state.baseline = cfg.baseline_decay * st.baseline +
                   (1.0 - cfg.baseline_decay) * st.mean_return;
  ++state.step;
  return st;
}

}  // namespace molrl
