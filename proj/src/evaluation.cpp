//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molrl/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "molrl/descriptors.hpp"
#include "molrl/error.hpp"
#include "molrl/parallel.hpp"
#include "molrl/smiles.hpp"

namespace molrl {

double EvaluationReport::top_mean() const {
  if (top.empty()) return 0.0;
  double s = 0;
  for (const auto &t : top) s += t.total;
  return s / static_cast<double>(top.size());
}

bool EvaluationReport::identified() const {
  return std::any_of(top.begin(), top.end(), [](const RankedSample &t) {
    return t.similarity && *t.similarity == 1.0;
  });
}

EvaluationReport rank_samples(const std::vector<Molecule> &molecules,
                              const ConstraintSpec &spec, int k) {
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  EvaluationReport r;
  std::set<std::string> distinct;
  int valid = 0;
  for (const auto &m : molecules) {
    RankedSample s;
    s.smiles = m.smiles;
    s.valid = m.valid();
    s.scores = score_constraints(m.graph, spec);
    s.total = eval_total(s.scores);
    if (s.valid) {
      ++valid;
      distinct.insert(s.smiles);
    }
    r.samples.push_back(std::move(s));
  }
  if (!molecules.empty())
    r.validity = static_cast<double>(valid) / molecules.size();
  r.uniqueness = valid ? static_cast<double>(distinct.size()) / valid : 0.0;
  std::vector<std::size_t> order(r.samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto &x = r.samples[a], &y = r.samples[b];
    if (x.total != y.total) return x.total > y.total;
    if (x.valid != y.valid) return x.valid;
    return x.smiles < y.smiles;
  });
  const std::size_t keep = std::min<std::size_t>(k, order.size());
  for (std::size_t i = 0; i < keep; ++i) r.top.push_back(r.samples[order[i]]);
  return r;
}

EvaluationReport sample_and_rank(const ModelParams<float> &agent,
                                 const Vocabulary &vocab,
                                 const ConstraintSpec &spec, int n, int k,
                                 std::uint64_t seed, int workers) {
  if (n < 1 || k < 0 || k > n)
    throw std::invalid_argument("need n >= 1 and 0 <= k <= n");
  const auto samples =
      sample_many(agent, sampler_config(vocab), n, seed, workers);
  std::vector<Molecule> mols(samples.size());
  parallel_for(static_cast<int>(samples.size()), workers, [&](int i) {
    mols[i] = decode_molecule(samples[i].sequence, vocab);
    if (!mols[i].valid() && mols[i].smiles.empty()) {
      std::string raw;
      for (int id : samples[i].sequence.logical())
        if (id != vocab.start() && id != vocab.end()) raw += vocab.token(id);
      mols[i].smiles = denormalize_smiles(raw);
    }
  });
  return rank_samples(mols, spec, k);
}

void similarity_report(EvaluationReport &report, const std::string &target) {
  const Validity v = is_valid(target);
  if (!v || target.empty()) throw DataError("invalid target SMILES: " + target);
  const Fingerprint ft = fingerprint(parse_smiles(target));
  report.target = target;
  for (auto &t : report.top) {
    if (!t.valid) {
      t.similarity = 0.0;
      continue;
    }
    t.similarity = tanimoto(fingerprint(parse_smiles(t.smiles)), ft);
  }
}

std::string format_report(const EvaluationReport &r,
                          const ConstraintSpec &spec) {
  std::ostringstream o;
  char buf[96];
  o << "samples " << r.samples.size() << '\n';
  std::snprintf(buf, sizeof buf, "validity %.4f\nuniqueness %.4f\n",
                r.validity, r.uniqueness);
  o << buf;
  std::snprintf(buf, sizeof buf, "top%zu_mean %.6f\n", r.top.size(),
                r.top_mean());
  o << buf;
  if (r.target)
    o << "target " << *r.target << "\nidentified "
      << (r.identified() ? "yes" : "no") << '\n';
  o << "# ranking\nrank\tsmiles\ttotal\tmw";
  for (const auto &c : spec.fg) o << '\t' << c.name;
  o << "\tsimilarity\n";
  for (std::size_t i = 0; i < r.top.size(); ++i) {
    const auto &t = r.top[i];
    std::snprintf(buf, sizeof buf, "\t%.6f\t%.6f", t.total, t.scores.mw);
    o << i + 1 << '\t' << t.smiles << buf;
    for (int v : t.scores.fg) o << '\t' << v;
    o << '\t';
    if (t.similarity) {
      std::snprintf(buf, sizeof buf, "%.6f", *t.similarity);
      o << buf;
    }
    o << '\n';
  }
  return o.str();
}

}  // namespace molrl
