//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLRL_MOL_GRAPH_HPP_
#define MOLRL_MOL_GRAPH_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace molrl {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

struct Atom {
  int atomic_number = 6;
  bool aromatic = false;
  int charge = 0;
  // Hydrogens written inside a bracket atom.
  int explicit_h = 0;
  // Hydrogens inferred from the default valence (organic-subset atoms only).
  int implicit_h = 0;
  int isotope = 0;
  bool bracket = false;

  int total_h() const { return explicit_h + implicit_h; }
};

struct Bond {
  int begin;
  int end;
  BondOrder order;
  bool in_ring = false;

  int other(int atom) const { return atom == begin ? end : begin; }
};

struct Neighbor {
  int atom;
  int bond;
};

/// Heavy-atom molecular graph. Hydrogens live as counts on their atoms.
class MolGraph {
 public:
  int add_atom(const Atom &atom);
  /// Returns the bond index, or -1 when the atoms are already bonded.
  int add_bond(int begin, int end, BondOrder order);

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_bonds() const { return static_cast<int>(bonds_.size()); }
  bool empty() const { return atoms_.empty(); }

  const Atom &atom(int i) const { return atoms_[i]; }
  Atom &atom(int i) { return atoms_[i]; }
  const Bond &bond(int i) const { return bonds_[i]; }
  Bond &bond(int i) { return bonds_[i]; }
  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const Bond> bonds() const { return bonds_; }
  std::span<const Neighbor> neighbors(int atom) const {
    return adjacency_[atom];
  }
  int degree(int atom) const {
    return static_cast<int>(adjacency_[atom].size());
  }

  /// Bond index between two atoms, or -1.
  int find_bond(int a, int b) const;

  /// True when the atom takes part in at least one ring bond.
  bool in_ring(int atom) const;

  /// Marks every bond that lies on a cycle (i.e. every non-bridge).
  void perceive_rings();

  /// Connected components as lists of atom indices.
  std::vector<std::vector<int>> components() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

/// Sum of bond orders at an atom, aromatic bonds counting as one.
int bond_order_sum(const MolGraph &g, int atom);

std::string element_symbol(const Atom &atom);

}  // namespace molrl

#endif  // MOLRL_MOL_GRAPH_HPP_
