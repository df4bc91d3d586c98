//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molrl/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "molrl/error.hpp"
#include "molrl/parallel.hpp"
#include "molrl/random.hpp"
#include "molrl/sampling.hpp"

namespace molrl {
namespace {

std::vector<ConstraintScores> score_all(const std::vector<SampleResult> &s,
                                        const Vocabulary &vocab,
                                        const ConstraintSpec &spec,
                                        int workers) {
  std::vector<ConstraintScores> out(s.size());
  parallel_for(static_cast<int>(s.size()), workers, [&](int i) {
    out[i] = score_sequence(s[i].sequence, vocab, spec);
  });
  return out;
}

// Index of each fg id within the spec.
std::vector<std::size_t> spec_positions(const std::vector<int> &ids,
                                        const ConstraintSpec &spec) {
  std::vector<std::size_t> pos;
  for (int id : ids) {
    auto it = std::find_if(spec.fg.begin(), spec.fg.end(),
                           [id](const FgConstraint &c) { return c.id == id; });
    if (it == spec.fg.end())
      throw std::invalid_argument("fg id " + std::to_string(id) +
                                  " is not in the constraint spec");
    pos.push_back(static_cast<std::size_t>(it - spec.fg.begin()));
  }
  return pos;
}

// Mean of integer scores; the sum is exact so the order never matters.
double mean_at(const ConstraintScores &s, const std::vector<std::size_t> &pos) {
  int sum = 0;
  for (std::size_t p : pos) sum += s.fg[p];
  return static_cast<double>(sum) / static_cast<double>(pos.size());
}

}  // namespace

// ------------------------------------------------------------ difficulty

DifficultyReport difficulty_from_scores(
    const std::vector<ConstraintScores> &scores, const ConstraintSpec &spec) {
  DifficultyReport r;
  r.samples = static_cast<int>(scores.size());
  if (scores.empty()) throw std::invalid_argument("no samples");
  for (std::size_t j = 0; j < spec.fg.size(); ++j) {
    long sum = 0;
    for (const auto &s : scores) sum += s.fg[j];
    r.fg_ids.push_back(spec.fg[j].id);
    r.difficulty.push_back(static_cast<double>(sum) / r.samples);
  }
  double mw = 0;
  for (const auto &s : scores) mw += s.mw;
  r.mw_difficulty = mw / r.samples;
  return r;
}

DifficultyReport difficulty_scores(const ModelParams<float> &prior,
                                   const Vocabulary &vocab,
                                   const ConstraintSpec &spec, int n,
                                   std::uint64_t seed, int workers) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const auto samples =
      sample_many(prior, sampler_config(vocab), n, seed, workers);
  return difficulty_from_scores(score_all(samples, vocab, spec, workers), spec);
}

std::vector<std::vector<int>> make_bins(const DifficultyReport &report,
                                        int n_bins) {
  const int n = static_cast<int>(report.fg_ids.size());
  if (n_bins < 1 || n_bins > n)
    throw std::invalid_argument("n_bins must be in 1..number of constraints");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (report.difficulty[a] != report.difficulty[b])
      return report.difficulty[a] > report.difficulty[b];
    return report.fg_ids[a] < report.fg_ids[b];
  });
  std::vector<std::vector<int>> bins(n_bins);
  const int base = n / n_bins, extra = n % n_bins;
  int at = 0;
  for (int b = 0; b < n_bins; ++b)
    for (int k = 0; k < base + (b < extra ? 1 : 0); ++k)
      bins[b].push_back(report.fg_ids[order[at++]]);
  return bins;
}

// ------------------------------------------------------------ plans

std::string method_name(Method m) {
  switch (m) {
    case Method::kBaseline: return "baseline";
    case Method::kRF: return "rf";
    case Method::kCF: return "cf";
    case Method::kCRF: return "crf";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "baseline") return Method::kBaseline;
  if (s == "rf") return Method::kRF;
  if (s == "cf") return Method::kCF;
  if (s == "crf") return Method::kCRF;
  throw DataError("unknown method " + std::string(name));
}

PhasePlan PhasePlan::preset(Method method, int n) {
  PhasePlan p;
  p.method = method;
  switch (method) {
    case Method::kBaseline: break;
    case Method::kRF: p.phases = n; p.retrains_per_phase = 1; break;
    case Method::kCF: p.n_bins = p.phases = n; break;
    case Method::kCRF: p.n_bins = p.phases = n; p.retrains_per_phase = 1; break;
  }
  return p;
}

void PhasePlan::validate() const {
  auto bad = [](const std::string &why) {
    throw DataError("invalid phase plan: " + why);
  };
  if (n_bins < 1 || phases < 1) bad("bins and phases must be >= 1");
  if (retrains_per_phase != 0 && retrains_per_phase != 1)
    bad("retrains_per_phase must be 0 or 1");
  switch (method) {
    case Method::kBaseline:
      if (n_bins != 1 || phases != 1 || retrains_per_phase != 0)
        bad("baseline is 1 bin, 0 retrains, 1 phase");
      break;
    case Method::kRF:
      if (n_bins != 1 || retrains_per_phase != 1)
        bad("rf is 1 bin with 1 retrain per phase");
      break;
    case Method::kCF:
    case Method::kCRF:
      if (phases != n_bins) bad("curriculum methods run one phase per bin");
      if (retrains_per_phase != (method == Method::kCRF ? 1 : 0))
        bad("cf has no retrain, crf retrains once per phase");
      break;
  }
  if (!(w >= 0 && w <= 1) || !(beta >= 0 && beta <= 1))
    bad("w and beta must lie in [0, 1]");
  if (budget < 0 || patience < 1) bad("budget >= 0 and patience >= 1");
  if (!bins.empty() && static_cast<int>(bins.size()) != n_bins)
    bad("bin list does not match n_bins");
}

PhasePlan PhasePlan::parse(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), '=', ' ');
    std::replace(line.begin(), line.end(), ':', ' ');
    std::istringstream f(line);
    std::string key, value, extra;
    if (!(f >> key)) continue;
    if (!(f >> value) || (f >> extra))
      throw DataError("phase plan: expected `key value` in: " + line);
    if (!kv.emplace(key, value).second)
      throw DataError("phase plan: repeated key " + key);
  }
  auto take = [&](const char *key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto as_int = [](const std::string &v) {
    std::size_t used = 0;
    long long x = 0;
    try { x = std::stoll(v, &used); } catch (const std::exception &) { used = 0; }
    if (used != v.size()) throw DataError("phase plan: bad integer " + v);
    return x;
  };
  auto as_double = [](const std::string &v) {
    std::size_t used = 0;
    double x = 0;
    try { x = std::stod(v, &used); } catch (const std::exception &) { used = 0; }
    if (used != v.size()) throw DataError("phase plan: bad number " + v);
    return x;
  };
  const auto method = take("method");
  if (!method) throw DataError("phase plan: missing method");
  const Method m = parse_method(*method);
  const auto n_bins = take("n_bins");
  const auto phases = take("phases");
  int n = 1;
  if (m == Method::kRF && phases) n = static_cast<int>(as_int(*phases));
  else if (n_bins) n = static_cast<int>(as_int(*n_bins));
  PhasePlan p = preset(m, n);
  if (n_bins) p.n_bins = static_cast<int>(as_int(*n_bins));
  if (phases) p.phases = static_cast<int>(as_int(*phases));
  if (auto v = take("retrains_per_phase")) p.retrains_per_phase = static_cast<int>(as_int(*v));
  if (auto v = take("w")) p.w = as_double(*v);
  if (auto v = take("beta")) p.beta = as_double(*v);
  if (auto v = take("budget")) p.budget = static_cast<int>(as_int(*v));
  if (auto v = take("patience")) p.patience = static_cast<int>(as_int(*v));
  if (auto v = take("seed")) p.seed = static_cast<std::uint64_t>(as_int(*v));
  if (auto v = take("baseline_reward")) {
    if (*v == "equal") p.baseline_reward = BaselineReward::kEqual;
    else if (*v == "beta") p.baseline_reward = BaselineReward::kBetaWeighted;
    else throw DataError("phase plan: baseline_reward is equal or beta");
  }
  if (!kv.empty()) throw DataError("phase plan: unknown key " + kv.begin()->first);
  p.validate();
  return p;
}

PhasePlan PhasePlan::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string PhasePlan::to_text() const {
  std::ostringstream o;
  o.precision(17);
  o << "method " << method_name(method) << '\n'
    << "n_bins " << n_bins << '\n'
    << "phases " << phases << '\n'
    << "retrains_per_phase " << retrains_per_phase << '\n'
    << "w " << w << '\n'
    << "beta " << beta << '\n'
    << "budget " << budget << '\n'
    << "patience " << patience << '\n'
    << "seed " << seed << '\n'
    << "baseline_reward "
    << (baseline_reward == BaselineReward::kEqual ? "equal" : "beta") << '\n';
  return o.str();
}

// ------------------------------------------------------------ rewards

ScoreFn phase_constraint_fn(const std::vector<std::vector<int>> &bins, int k,
                            double w, double beta,
                            const ConstraintSpec &spec) {
  if (k < 1 || k > static_cast<int>(bins.size()))
    throw std::out_of_range("phase " + std::to_string(k) + " out of range");
  std::vector<std::vector<std::size_t>> pos;
  for (int b = 0; b < k; ++b) {
    if (bins[b].empty()) throw std::invalid_argument("empty bin");
    pos.push_back(spec_positions(bins[b], spec));
  }
  return [pos, w, beta](const ConstraintScores &s) {
    const double current = mean_at(s, pos.back());
    double mix = current;
    if (pos.size() > 1) {
      double prev = 0;
      for (std::size_t b = 0; b + 1 < pos.size(); ++b) prev += mean_at(s, pos[b]);
      prev /= static_cast<double>(pos.size() - 1);
      mix = (1.0 - w) * prev + w * current;
    }
    return beta * s.mw + (1.0 - beta) * mix;
  };
}

ScoreFn baseline_fn(BaselineReward kind, double beta) {
  if (kind == BaselineReward::kEqual)
    return [](const ConstraintScores &s) { return baseline_constraint(s); };
  return [beta](const ConstraintScores &s) {
    int sum = 0;
    for (int v : s.fg) sum += v;
    const double fg = static_cast<double>(sum) / static_cast<double>(s.fg.size());
    return beta * s.mw + (1.0 - beta) * fg;
  };
}

ScoreFn refined_constraint_fn(const ConstraintSpec &spec,
                              const std::set<int> &weak) {
  if (weak.empty()) throw std::invalid_argument("empty weak set");
  std::vector<int> weak_ids(weak.begin(), weak.end()), rest_ids;
  for (const auto &c : spec.fg)
    if (!weak.count(c.id)) rest_ids.push_back(c.id);
  const auto wpos = spec_positions(weak_ids, spec);
  const auto rpos = spec_positions(rest_ids, spec);
  return [wpos, rpos](const ConstraintScores &s) {
    if (rpos.empty()) return (s.mw + mean_at(s, wpos)) / 2.0;
    return (s.mw + mean_at(s, wpos) + mean_at(s, rpos)) / 3.0;
  };
}

// ------------------------------------------------------------ scheduler

std::string format_iteration(const IterationRecord &r) {
  std::ostringstream o;
  char buf[64];
  o << r.phase << ' ' << r.pass << ' ' << r.iteration;
  std::snprintf(buf, sizeof buf, " %.6f %.4f", r.mean_reward, r.validity);
  o << buf;
  for (double v : r.satisfaction) {
    std::snprintf(buf, sizeof buf, " %.4f", v);
    o << buf;
  }
  return o.str();
}

std::vector<IterationRecord> train_loop(RlState &state,
                                        const ModelParams<float> &prior,
                                        const ScoreFn &fn, int budget,
                                        int patience, int phase, int pass,
                                        const CurriculumContext &ctx) {
  std::vector<IterationRecord> log;
  const int batch = ctx.rl.batch_size;
  std::vector<ConstraintScores> scores(batch);
  auto scorer = [&](const SampleResult &s, std::size_t i) {
    const Molecule m = decode_molecule(s.sequence, ctx.vocab);
    scores[i] = score_constraints(m.graph, ctx.spec);
    return TrajectoryScore{fn(scores[i]), m.valid()};
  };
  double best = -INFINITY;
  int stale = 0;
  for (int it = 0; it < budget; ++it) {
    const BatchStats st = reinforce_step(state, prior, scorer, ctx.rl);
    IterationRecord r;
    r.phase = phase;
    r.pass = pass;
    r.iteration = it + 1;
    r.mean_reward = st.mean_constraint;
    r.mean_return = st.mean_return;
    r.mean_kl = st.mean_kl;
    r.validity = st.validity;
    const std::size_t nc = 1 + ctx.spec.fg.size();
    r.satisfaction.assign(nc, 0.0);
    for (const auto &s : scores) {
      r.satisfaction[0] += s.mw;
      for (std::size_t j = 0; j < s.fg.size(); ++j) r.satisfaction[j + 1] += s.fg[j];
    }
    for (double &v : r.satisfaction) v = (v / batch + 1.0) / 2.0;
    log.push_back(r);
    if (ctx.on_iteration) ctx.on_iteration(r);
    if (r.mean_reward > best) {
      best = r.mean_reward;
      stale = 0;
    } else if (++stale >= patience) {
      break;
    }
  }
  return log;
}

CurriculumResult run_curriculum(const PhasePlan &plan,
                                const ModelParams<float> &prior,
                                const CurriculumContext &ctx) {
  plan.validate();
  ctx.spec.validate();
  std::vector<std::vector<int>> bins = plan.bins;
  if (bins.empty()) {
    if (plan.n_bins != 1)
      throw std::invalid_argument("curriculum plan needs difficulty bins");
    bins.emplace_back();
    for (const auto &c : ctx.spec.fg) bins[0].push_back(c.id);
  }
  {
    std::vector<int> all;
    for (const auto &b : bins) all.insert(all.end(), b.begin(), b.end());
    std::vector<int> want;
    for (const auto &c : ctx.spec.fg) want.push_back(c.id);
    std::sort(all.begin(), all.end());
    std::sort(want.begin(), want.end());
    if (all != want)
      throw std::invalid_argument("bins must partition the spec's fg ids");
  }

  CurriculumResult res{clone_params(prior), clone_params(prior), {}, {}};
  for (int k = 1; k <= plan.phases; ++k) {
    const ScoreFn fn =
        plan.method == Method::kCF || plan.method == Method::kCRF
            ? phase_constraint_fn(bins, k, plan.w, plan.beta, ctx.spec)
            : baseline_fn(plan.baseline_reward, plan.beta);
    RlState state = RlState::start(
        res.prior, derive_seed(plan.seed, "phase", k), ctx.optimizer);
    int iters = 0;
    for (int pass = 0; pass <= plan.retrains_per_phase; ++pass) {
      auto log = train_loop(state, res.prior, fn, plan.budget, plan.patience,
                            k, pass, ctx);
      iters += static_cast<int>(log.size());
      res.log.insert(res.log.end(), log.begin(), log.end());
    }
    res.agent = std::move(state.agent);
    res.prior = clone_params(res.agent);
    res.boundaries.push_back({k, iters, clone_params(res.agent)});
  }
  return res;
}

// ------------------------------------------------------------ refinement

WeakReport detect_weak_constraints(const ModelParams<float> &agent,
                                   const Vocabulary &vocab,
                                   const ConstraintSpec &spec, double xi,
                                   int n, std::uint64_t seed, int workers) {
  const DifficultyReport d =
      difficulty_scores(agent, vocab, spec, n, seed, workers);
  WeakReport r;
  r.fg_ids = d.fg_ids;
  for (std::size_t j = 0; j < d.fg_ids.size(); ++j) {
    r.satisfaction.push_back(d.probability(j));
    if (r.satisfaction.back() < xi) r.weak.insert(d.fg_ids[j]);
  }
  return r;
}

CurriculumResult refine(const ModelParams<float> &agent,
                        const std::set<int> &weak, const PhasePlan &plan,
                        const CurriculumContext &ctx) {
  const ScoreFn fn = refined_constraint_fn(ctx.spec, weak);
  CurriculumResult res{clone_params(agent), clone_params(agent), {}, {}};
  RlState state =
      RlState::start(res.prior, derive_seed(plan.seed, "refine"), ctx.optimizer);
  res.log = train_loop(state, res.prior, fn, plan.budget, plan.patience, 0, 0,
                       ctx);
  res.agent = std::move(state.agent);
  res.prior = clone_params(res.agent);
  res.boundaries.push_back(
      {0, static_cast<int>(res.log.size()), clone_params(res.agent)});
  return res;
}

}  // namespace molrl
