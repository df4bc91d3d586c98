//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLRL_DESCRIPTORS_HPP_
#define MOLRL_DESCRIPTORS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "molrl/mol_graph.hpp"

namespace molrl {

/// Sum of standard atomic weights, implicit and explicit hydrogens
/// included. Isotope labels are ignored.
double molecular_weight(const MolGraph &g);

// ------------------------------------------------------ functional groups

struct AtomPrimitive {
  enum class Kind {
    kAny,
    kElement,        // value = atomic number, aromatic flag must match
    kAtomicNumber,   // value = atomic number, any aromaticity
    kAromatic,
    kAliphatic,
    kTotalH,         // value = total hydrogen count
    kHeavyDegree,    // value = number of heavy neighbours
    kConnectivity,   // value = heavy neighbours + hydrogens
    kInRing,
  };
  Kind kind = Kind::kAny;
  int value = 0;
  bool aromatic = false;
  bool negate = false;
};

/// Conjunction of primitives.
struct AtomQuery {
  std::vector<AtomPrimitive> primitives;
};

enum class BondQuery {
  kSingle,
  kDouble,
  kTriple,
  kAromatic,
  kAny,
  kSingleOrAromatic,
};

struct QueryBond {
  int begin;
  int end;
  BondQuery order;
};

/// Small query graph for one functional group.
///
/// Pattern expressions use a SMILES-like notation: organic symbols
/// (uppercase aliphatic, lowercase aromatic), `*` any atom, `a`/`A` any
/// aromatic/aliphatic atom, bonds `- = # : ~` (`~` matches any bond; an
/// unwritten bond is aromatic between aromatic symbols and single-or-
/// aromatic otherwise), branches and ring digits 1-9. Bracket atoms hold
/// `;`-separated primitives, each optionally negated with `!`: an element
/// symbol, `#n` atomic number, `a`, `A`, `Hn` total hydrogens, `Dn` heavy
/// degree, `Xn` total connections, `R` ring membership.
class FunctionalGroupPattern {
 public:
  static FunctionalGroupPattern parse(int id, std::string name,
                                      std::string_view expression);

  int id() const { return id_; }
  const std::string &name() const { return name_; }
  const std::string &expression() const { return expression_; }
  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  const AtomQuery &atom(int i) const { return atoms_[i]; }
  const std::vector<QueryBond> &bonds() const { return bonds_; }
  /// Number of query bonds incident to the atom.
  int degree(int atom) const;

 private:
  int id_ = 0;
  std::string name_;
  std::string expression_;
  std::vector<AtomQuery> atoms_;
  std::vector<QueryBond> bonds_;
};

bool atom_matches(const AtomQuery &query, const MolGraph &g, int atom);
bool bond_matches(BondQuery query, const Bond &bond);

/// True iff some injective mapping of pattern atoms onto molecule atoms
/// satisfies every atom and bond query.
bool match_group(const MolGraph &g, const FunctionalGroupPattern &pattern);

/// Fixed catalog of 20 patterns with ids 1..20.
class FunctionalGroupCatalog {
 public:
  static constexpr int kSize = 20;

  /// The catalog shipped with the library (same content as
  /// data/fg_catalog.txt).
  static const FunctionalGroupCatalog &builtin();
  /// Records `id | name | pattern`; blank and `#` lines are skipped.
  static FunctionalGroupCatalog from_text(std::string_view text);
  static FunctionalGroupCatalog load(const std::filesystem::path &path);

  const std::vector<FunctionalGroupPattern> &patterns() const {
    return patterns_;
  }
  /// Throws DataError for ids outside the catalog.
  const FunctionalGroupPattern &get(int id) const;
  bool contains(int id) const;

 private:
  std::vector<FunctionalGroupPattern> patterns_;  // sorted by id
};

// ------------------------------------------------------------ fingerprint

struct Fingerprint {
  static constexpr int kDefaultWidth = 2048;
  static constexpr int kDefaultMaxPath = 7;

  int width = kDefaultWidth;
  int max_path_bonds = kDefaultMaxPath;
  std::vector<std::uint64_t> words;

  bool test(int bit) const { return (words[bit / 64] >> (bit % 64)) & 1u; }
  void set(int bit) { words[bit / 64] |= std::uint64_t{1} << (bit % 64); }
  int count() const;

  bool operator==(const Fingerprint &) const = default;
};

/// Canonical label of one linear path: atoms and bonds alternating, the
/// lexicographically smaller of the two reading directions.
std::string path_label(const MolGraph &g, const std::vector<int> &atoms);

/// Folds a path label to its bit index.
int path_bit(std::string_view label, int width);

/// Hashes every simple path of 0..max_path_bonds bonds into the bit vector.
Fingerprint fingerprint(const MolGraph &g,
                        int width = Fingerprint::kDefaultWidth,
                        int max_path_bonds = Fingerprint::kDefaultMaxPath);

/// |a & b| / |a | b|; 1.0 when both are empty. Throws on width mismatch.
double tanimoto(const Fingerprint &a, const Fingerprint &b);

}  // namespace molrl

#endif  // MOLRL_DESCRIPTORS_HPP_
