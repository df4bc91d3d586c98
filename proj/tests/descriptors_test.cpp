//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molrl/descriptors.hpp"

#include <random>
#include <string>

#include <gtest/gtest.h>

#include "match_oracle.hpp"
#include "molrl/error.hpp"
#include "molrl/smiles.hpp"
#include "test_common.hpp"

namespace molrl {
namespace {

double mw(const std::string &s) { return molecular_weight(parse_smiles(s)); }

TEST(MolecularWeightTest, SmallMolecules) {
  EXPECT_NEAR(mw("C"), 12.011 + 4 * 1.008, 1e-9);
  EXPECT_NEAR(mw("C"), 16.043, 1e-9);
  EXPECT_NEAR(mw("O"), 18.015, 1e-9);
  EXPECT_EQ(molecular_weight(MolGraph{}), 0.0);
  EXPECT_NEAR(mw("c1ccccc1O"), 94.113, 1e-9);
  EXPECT_NEAR(mw("[13CH4]"), mw("C"), 1e-12);
}

TEST(MolecularWeightTest, AdditiveAndPositive) {
  for (const auto &s : test::sample_molecules()) {
    EXPECT_GT(mw(s), 0.0);
    EXPECT_NEAR(mw(s + ".O"), mw(s) + mw("O"), 1e-9);
  }
}

TEST(MolecularWeightTest, UnknownElement) {
  MolGraph g;
  Atom a;
  a.atomic_number = 118;
  g.add_atom(a);
  EXPECT_THROW(molecular_weight(g), DataError);
}

const FunctionalGroupPattern &group(const std::string &name) {
  for (const auto &p : FunctionalGroupCatalog::builtin().patterns())
    if (p.name() == name) return p;
  throw std::runtime_error("no group " + name);
}

bool has(const std::string &smiles, const std::string &name) {
  return match_group(parse_smiles(smiles), group(name));
}

TEST(MatchGroupTest, SpecExamples) {
  EXPECT_TRUE(has("c1ccccc1", "benzene"));
  EXPECT_FALSE(has("CCO", "aldehyde"));
  for (const auto &p : FunctionalGroupCatalog::builtin().patterns())
    EXPECT_FALSE(match_group(MolGraph{}, p));
}

struct GroupCase {
  const char *name;
  const char *present;
  const char *absent;
};

TEST(MatchGroupTest, EveryCatalogEntry) {
  const GroupCase cases[] = {
      {"benzene", "Cc1ccccc1", "C1CCCCC1"},
      {"aldehyde", "CCC=O", "CC(C)=O"},
      {"ketone", "CC(=O)CC", "CCC(=O)O"},
      {"ether", "CCOCC", "CCCO"},
      {"ester", "CC(=O)OC", "CC(=O)O"},
      {"carboxylic_acid", "CCC(=O)O", "CCC(=O)OC"},
      {"primary_alcohol", "CCCO", "CC(O)C"},
      {"secondary_alcohol", "CC(O)C", "CCCO"},
      {"tertiary_alcohol", "CC(C)(C)O", "CC(C)CO"},
      {"alkene", "CC=CC", "CC#CC"},
      {"alkyne", "CC#C", "CC=C"},
      {"lactone", "O=C1CCCO1", "CC(=O)OC"},
      {"phenol", "Oc1ccccc1", "OCc1ccccc1"},
      {"furan", "Cc1ccco1", "C1CCOC1"},
      {"allylic_oxidation_site", "CC=CC", "C=C"},
      {"acetal", "CC(OC)OC", "CC(=O)OC"},
      {"epoxide", "CC1CO1", "C1CCO1"},
      {"methyl", "CO", "C1CCCC1"},
      {"unbranched_chain", "CCCCCCO", "CC(C)CC(C)C"},
      {"five_membered_ring", "C1CCCC1", "C1CCCCC1"},
  };
  for (const auto &c : cases) {
    EXPECT_TRUE(has(c.present, c.name)) << c.name << " in " << c.present;
    EXPECT_FALSE(has(c.absent, c.name)) << c.name << " in " << c.absent;
  }
}

TEST(MatchGroupTest, IndependentOfAtomOrder) {
  std::mt19937_64 rng(11);
  for (const auto &s : test::sample_molecules()) {
    const MolGraph g = parse_smiles(s);
    const MolGraph h =
        parse_smiles(write_smiles(g, static_cast<int>(rng() % g.num_atoms()),
                                  rng()));
    for (const auto &p : FunctionalGroupCatalog::builtin().patterns())
      EXPECT_EQ(match_group(g, p), match_group(h, p)) << s << " " << p.name();
  }
}

TEST(MatchGroupTest, AgreesWithBruteForceOnSamples) {
  for (const auto &s : test::sample_molecules()) {
    const MolGraph g = parse_smiles(s);
    for (const auto &p : FunctionalGroupCatalog::builtin().patterns())
      EXPECT_EQ(match_group(g, p), test::brute_force_match(g, p))
          << s << " " << p.name();
  }
}

TEST(CatalogTest, DataFileMatchesBuiltin) {
  const auto file =
      FunctionalGroupCatalog::load(test::data_path("fg_catalog.txt"));
  const auto &builtin = FunctionalGroupCatalog::builtin();
  ASSERT_EQ(file.patterns().size(), 20u);
  for (int id = 1; id <= 20; ++id) {
    EXPECT_EQ(file.get(id).name(), builtin.get(id).name());
    EXPECT_EQ(file.get(id).expression(), builtin.get(id).expression());
    EXPECT_LE(builtin.get(id).num_atoms(), 8);
  }
  EXPECT_THROW(builtin.get(21), DataError);
}

TEST(CatalogTest, RejectsBadCatalogs) {
  EXPECT_THROW(FunctionalGroupCatalog::from_text("1 | x | C\n"), DataError);
  std::string dup;
  for (int i = 1; i <= 20; ++i)
    dup += std::to_string(i == 20 ? 19 : i) + " | g | C\n";
  EXPECT_THROW(FunctionalGroupCatalog::from_text(dup), DataError);
  EXPECT_THROW(FunctionalGroupPattern::parse(1, "x", "C.C"), DataError);
  EXPECT_THROW(FunctionalGroupPattern::parse(1, "x", "C(C"), DataError);
  EXPECT_THROW(FunctionalGroupPattern::parse(1, "x", "[Q]"), DataError);
}

TEST(FingerprintTest, SingleAtom) {
  const Fingerprint fp = fingerprint(parse_smiles("C"));
  EXPECT_EQ(fp.count(), 1);
  EXPECT_TRUE(fp.test(path_bit("C", fp.width)));
}

TEST(FingerprintTest, DeterministicAndDistinct) {
  EXPECT_EQ(fingerprint(parse_smiles("CCO")), fingerprint(parse_smiles("CCO")));
  EXPECT_NE(fingerprint(parse_smiles("CC")), fingerprint(parse_smiles("CCC")));
  EXPECT_EQ(fingerprint(parse_smiles("OCC")), fingerprint(parse_smiles("CCO")));
}

TEST(FingerprintTest, PathsOfEthanol) {
  // Paths: C, C, O, C-C, C-O, C-C-O.
  Fingerprint expected;
  expected.words.assign(expected.width / 64, 0);
  for (const char *p : {"C", "O", "C-C", "C-O", "C-C-O"})
    expected.set(path_bit(p, expected.width));
  EXPECT_EQ(fingerprint(parse_smiles("CCO")), expected);
}

TEST(FingerprintTest, InvariantUnderAtomReordering) {
  std::mt19937_64 rng(5);
  for (const auto &s : test::sample_molecules()) {
    const MolGraph g = parse_smiles(s);
    const Fingerprint ref = fingerprint(g);
    EXPECT_GT(ref.count(), 0);
    for (int t = 0; t < 3; ++t) {
      const std::string w =
          write_smiles(g, static_cast<int>(rng() % g.num_atoms()), rng());
      EXPECT_EQ(fingerprint(parse_smiles(w)), ref) << s << " vs " << w;
    }
  }
}

Fingerprint bits(std::initializer_list<int> on) {
  Fingerprint fp;
  fp.words.assign(fp.width / 64, 0);
  for (int b : on) fp.set(b);
  return fp;
}

TEST(TanimotoTest, Definition) {
  const Fingerprint x = fingerprint(parse_smiles("c1ccccc1O"));
  EXPECT_EQ(tanimoto(x, x), 1.0);
  EXPECT_EQ(tanimoto(bits({1, 2}), bits({3, 4})), 0.0);
  EXPECT_EQ(tanimoto(bits({1, 2}), bits({1, 2, 3, 4})), 0.5);
  EXPECT_EQ(tanimoto(bits({}), bits({})), 1.0);
  Fingerprint narrow;
  narrow.width = 1024;
  narrow.words.assign(16, 0);
  EXPECT_THROW(tanimoto(x, narrow), std::invalid_argument);
}

TEST(TanimotoTest, SymmetricAndBounded) {
  const auto mols = test::sample_molecules();
  for (std::size_t i = 0; i < mols.size(); ++i) {
    for (std::size_t j = 0; j < mols.size(); ++j) {
      const auto a = fingerprint(parse_smiles(mols[i]));
      const auto b = fingerprint(parse_smiles(mols[j]));
      const double s = tanimoto(a, b);
      EXPECT_EQ(s, tanimoto(b, a));
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 1.0);
    }
  }
}

TEST(TanimotoTest, IsomersAreSimilarButDistinct) {
  const auto a = fingerprint(parse_smiles("CCCCO"));
  const auto b = fingerprint(parse_smiles("CC(C)CO"));
  const double s = tanimoto(a, b);
  EXPECT_GT(s, 0.0);
  EXPECT_LT(s, 1.0);
}

}  // namespace
}  // namespace molrl
