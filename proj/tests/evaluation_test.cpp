//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molrl/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "molrl/descriptors.hpp"
#include "molrl/error.hpp"
#include "molrl/smiles.hpp"
#include "molrl/training.hpp"
#include "test_common.hpp"

namespace molrl {
namespace {

const FunctionalGroupCatalog &catalog() {
  return FunctionalGroupCatalog::builtin();
}

ConstraintSpec spec_of(const std::string &smiles) {
  const MolGraph g = parse_smiles(smiles);
  ConstraintSpec s;
  s.mw_target = molecular_weight(g);
  for (const auto &p : catalog().patterns())
    s.fg.push_back({p.id(), p.name(), match_group(g, p)});
  return s;
}

Molecule molecule(const std::string &smiles) {
  Molecule m;
  m.smiles = smiles;
  try {
    m.graph = parse_smiles(smiles);
  } catch (const std::exception &) {
    m.graph.reset();
  }
  return m;
}

std::vector<Molecule> corpus_molecules(std::size_t n) {
  std::ifstream in(test::data_path("corpus.smi"));
  std::vector<Molecule> out;
  for (std::string l; out.size() < n && std::getline(in, l);) out.push_back(molecule(l));
  return out;
}

// Component sum straight from the per-constraint scorers.
double oracle_total(const Molecule &m, const ConstraintSpec &spec) {
  if (!m.valid()) return -(1.0 + static_cast<double>(spec.fg.size()));
  double t = score_mw(*m.graph, spec.mw_target);
  for (const auto &c : spec.fg) t += score_fg(*m.graph, catalog().get(c.id), c.desired);
  return t;
}

// Labels of every simple path with up to `max_bonds` bonds.
std::set<std::string> path_labels(const MolGraph &g, int max_bonds) {
  std::set<std::string> out;
  std::vector<int> path;
  std::vector<bool> used(g.num_atoms(), false);
  std::function<void(int)> walk = [&](int a) {
    path.push_back(a);
    used[a] = true;
    out.insert(path_label(g, path));
    if (static_cast<int>(path.size()) <= max_bonds)
      for (const auto &nb : g.neighbors(a))
        if (!used[nb.atom]) walk(nb.atom);
    used[a] = false;
    path.pop_back();
  };
  for (int a = 0; a < g.num_atoms(); ++a) walk(a);
  return out;
}

std::optional<double> oracle_similarity(const std::string &x, const std::string &y) {
  const auto a = path_labels(parse_smiles(x), Fingerprint::kDefaultMaxPath);
  const auto b = path_labels(parse_smiles(y), Fingerprint::kDefaultMaxPath);
  std::set<std::string> both, either;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(both, both.end()));
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::inserter(either, either.end()));
  std::set<int> bits;
  for (const auto &l : either) bits.insert(path_bit(l, Fingerprint::kDefaultWidth));
  if (bits.size() != either.size()) return std::nullopt;  // folded collision
  return static_cast<double>(both.size()) / static_cast<double>(either.size());
}

TEST(RankSamplesTest, AgreesWithIndependentResort) {
  auto mols = corpus_molecules(300);
  mols.push_back(molecule("C1CC"));
  mols.push_back(molecule("CC(("));
  mols.push_back(mols[3]);
  const ConstraintSpec spec = spec_of("CC1OC(=O)CC1O");
  const auto r = rank_samples(mols, spec, static_cast<int>(mols.size()));
  std::vector<std::pair<double, std::string>> want;
  for (const auto &m : mols) want.emplace_back(oracle_total(m, spec), m.smiles);
  std::sort(want.begin(), want.end(), [](const auto &a, const auto &b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  ASSERT_EQ(r.top.size(), mols.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_NEAR(r.top[i].total, want[i].first, 1e-12) << i;
    if (i > 0 && r.top[i].total == r.top[i - 1].total && r.top[i].valid == r.top[i - 1].valid)
      EXPECT_LE(r.top[i - 1].smiles, r.top[i].smiles);
  }
  for (std::size_t i = 0; i < mols.size(); ++i) EXPECT_EQ(r.samples[i].smiles, mols[i].smiles);
}

TEST(RankSamplesTest, TiesAndInvalidOrdering) {
  ConstraintSpec spec;
  spec.mw_target = 400;  // every small molecule scores -1 on mw
  spec.fg = {{3, "ketone", true}};
  const std::vector<Molecule> mols{molecule("CCO"), molecule("C(("), molecule("CO"),
                                   molecule("CC(C)=O"), molecule("BrC")};
  const auto r = rank_samples(mols, spec, 5);
  ASSERT_EQ(r.top.size(), 5u);
  EXPECT_EQ(r.top[0].smiles, "CC(C)=O");
  EXPECT_EQ(r.top[1].smiles, "BrC");
  EXPECT_EQ(r.top[2].smiles, "CCO");
  EXPECT_EQ(r.top[3].smiles, "CO");
  EXPECT_EQ(r.top[4].smiles, "C((");
  EXPECT_FALSE(r.top[4].valid);
  EXPECT_EQ(r.top[4].total, -2.0);
  EXPECT_EQ(r.top[3].total, -2.0);
}

TEST(RankSamplesTest, InvalidScoresMinimum) {
  ConstraintSpec spec = spec_of("CCO");
  const auto r = rank_samples({molecule("C1CC")}, spec, 1);
  EXPECT_EQ(r.top[0].total, -21.0);
  EXPECT_EQ(r.validity, 0.0);
  EXPECT_EQ(r.uniqueness, 0.0);
}

TEST(RankSamplesTest, DegenerateSamplerScoresMaximum) {
  const std::string perfect = "OC1CCCC1=O";
  const ConstraintSpec spec = spec_of(perfect);
  const std::vector<Molecule> mols(256, molecule(perfect));
  const auto r = rank_samples(mols, spec, 5);
  ASSERT_EQ(r.top.size(), 5u);
  for (const auto &t : r.top) EXPECT_EQ(t.total, 21.0);
  EXPECT_EQ(r.top_mean(), 21.0);
  EXPECT_EQ(r.validity, 1.0);
  EXPECT_DOUBLE_EQ(r.uniqueness, 1.0 / 256.0);
}

TEST(RankSamplesTest, CountsAndLimits) {
  const std::vector<Molecule> mols{molecule("CCO"), molecule("CCO"), molecule("C(("),
                                   molecule("CC")};
  const auto r = rank_samples(mols, spec_of("CC"), 2);
  EXPECT_EQ(r.samples.size(), 4u);
  EXPECT_EQ(r.top.size(), 2u);
  EXPECT_EQ(r.validity, 0.75);
  EXPECT_DOUBLE_EQ(r.uniqueness, 2.0 / 3.0);
  EXPECT_TRUE(rank_samples(mols, spec_of("CC"), 0).top.empty());
  EXPECT_EQ(rank_samples(mols, spec_of("CC"), 10).top.size(), 4u);
  EXPECT_THROW(rank_samples(mols, spec_of("CC"), -1), std::invalid_argument);
  EXPECT_EQ(rank_samples({}, spec_of("CC"), 5).top_mean(), 0.0);
}

TEST(SimilarityTest, IdenticalTargetIsOne) {
  const auto r0 = rank_samples({molecule("CC1OC(=O)CC1O"), molecule("CCCO")},
                               spec_of("CC1OC(=O)CC1O"), 2);
  auto r = r0;
  similarity_report(r, "CC1OC(=O)CC1O");
  EXPECT_EQ(*r.top[0].similarity, 1.0);
  EXPECT_TRUE(r.identified());
  EXPECT_LT(*r.top[1].similarity, 1.0);
  EXPECT_FALSE(r0.identified());
  // a different writing of the same molecule
  auto r2 = r0;
  similarity_report(r2, "OC1CC(=O)OC1C");
  EXPECT_EQ(*r2.top[0].similarity, 1.0);
}

TEST(SimilarityTest, IsomersMatchPathOracle) {
  const std::vector<std::pair<std::string, std::string>> pairs{
      {"CCCCO", "CC(C)CO"}, {"CCCCCC", "CC(C)(C)CC"}, {"CCOCC", "CCCCO"},
      {"C1CCCC1", "C=CCCC"}, {"CC(=O)CC", "CCCC=O"}};
  int checked = 0;
  for (const auto &[a, b] : pairs) {
    ASSERT_NEAR(molecular_weight(parse_smiles(a)), molecular_weight(parse_smiles(b)), 1e-9);
    auto r = rank_samples({molecule(a)}, spec_of(a), 1);
    similarity_report(r, b);
    const double s = *r.top[0].similarity;
    EXPECT_GT(s, 0.0) << a << " " << b;
    EXPECT_LT(s, 1.0) << a << " " << b;
    EXPECT_FALSE(r.identified());
    if (auto o = oracle_similarity(a, b)) {
      EXPECT_DOUBLE_EQ(s, *o) << a << " " << b;
      ++checked;
    }
  }
  EXPECT_GE(checked, 4);
}

TEST(SimilarityTest, EmptyTopAndInvalidCandidates) {
  auto r = rank_samples({molecule("CCO")}, spec_of("CCO"), 0);
  similarity_report(r, "CCO");
  EXPECT_TRUE(r.top.empty());
  EXPECT_FALSE(r.identified());
  auto bad = rank_samples({molecule("C((")}, spec_of("CCO"), 1);
  similarity_report(bad, "CCO");
  EXPECT_EQ(*bad.top[0].similarity, 0.0);
}

TEST(SimilarityTest, InvalidTargetRejected) {
  auto r = rank_samples({molecule("CCO")}, spec_of("CCO"), 1);
  EXPECT_THROW(similarity_report(r, "C1CC"), DataError);
  EXPECT_THROW(similarity_report(r, ""), DataError);
  EXPECT_THROW(similarity_report(r, "CC(C"), DataError);
  EXPECT_FALSE(r.top[0].similarity.has_value());
}

class SampleAndRankTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    std::ifstream in(test::data_path("corpus.smi"));
    std::vector<std::string> lines;
    for (std::string l; lines.size() < 300 && std::getline(in, l);) lines.push_back(l);
    corpus_ = new Corpus(ingest_lines(lines));
    TrainConfig cfg;
    cfg.embed = 16;
    cfg.hidden = 32;
    cfg.epochs = 8;
    cfg.batch_size = 32;
    cfg.validity_samples = 0;
    cfg.seed = 2;
    params_ = new ModelParams<float>(train_prior(*corpus_, cfg).params);
  }
  static void TearDownTestSuite() {
    delete corpus_;
    delete params_;
  }
  static Corpus *corpus_;
  static ModelParams<float> *params_;
};

Corpus *SampleAndRankTest::corpus_ = nullptr;
ModelParams<float> *SampleAndRankTest::params_ = nullptr;

TEST_F(SampleAndRankTest, DeterministicAndWorkerIndependent) {
  const ConstraintSpec spec = spec_of("CC1OC(=O)CC1O");
  const auto a = sample_and_rank(*params_, corpus_->vocab, spec, 64, 5, 9);
  const auto b = sample_and_rank(*params_, corpus_->vocab, spec, 64, 5, 9);
  const auto c = sample_and_rank(*params_, corpus_->vocab, spec, 64, 5, 9, 3);
  EXPECT_EQ(format_report(a, spec), format_report(b, spec));
  EXPECT_EQ(format_report(a, spec), format_report(c, spec));
  const auto d = sample_and_rank(*params_, corpus_->vocab, spec, 64, 5, 10);
  EXPECT_NE(format_report(a, spec), format_report(d, spec));
  EXPECT_EQ(a.samples.size(), 64u);
  EXPECT_EQ(a.top.size(), 5u);
}

TEST_F(SampleAndRankTest, FullRankingWhenKEqualsN) {
  const ConstraintSpec spec = spec_of("CCO");
  const auto r = sample_and_rank(*params_, corpus_->vocab, spec, 32, 32, 4);
  ASSERT_EQ(r.top.size(), 32u);
  for (std::size_t i = 1; i < r.top.size(); ++i) EXPECT_GE(r.top[i - 1].total, r.top[i].total);
  std::multiset<std::string> all, top;
  for (const auto &s : r.samples) all.insert(s.smiles);
  for (const auto &s : r.top) top.insert(s.smiles);
  EXPECT_EQ(all, top);
  for (const auto &s : r.samples)
    if (!s.valid) EXPECT_EQ(s.total, -21.0);
  EXPECT_THROW(sample_and_rank(*params_, corpus_->vocab, spec, 4, 5, 1), std::invalid_argument);
  EXPECT_THROW(sample_and_rank(*params_, corpus_->vocab, spec, 0, 0, 1), std::invalid_argument);
}

TEST(FormatReportTest, MachineReadableRows) {
  const ConstraintSpec spec = spec_of("CCO");
  auto r = rank_samples({molecule("CCO"), molecule("CCCO"), molecule("C((")}, spec, 3);
  const std::string plain = format_report(r, spec);
  EXPECT_EQ(plain.find("target"), std::string::npos);
  similarity_report(r, "CCO");
  const std::string with = format_report(r, spec);
  EXPECT_NE(with.find("identified yes"), std::string::npos);
  for (const std::string *text : {&plain, &with}) {
    std::istringstream in(*text);
    std::string line;
    while (std::getline(in, line) && line != "# ranking") {}
    std::getline(in, line);  // header
    int rows = 0;
    for (; std::getline(in, line); ++rows) {
      const auto cols = std::count(line.begin(), line.end(), '\t') + 1;
      EXPECT_EQ(cols, 4 + 20 + 1) << line;
      const bool blank = line.back() == '\t';
      EXPECT_EQ(blank, text == &plain) << line;
    }
    EXPECT_EQ(rows, 3);
  }
}

}  // namespace
}  // namespace molrl
