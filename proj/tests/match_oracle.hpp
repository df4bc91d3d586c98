//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLRL_TESTS_MATCH_ORACLE_HPP_
#define MOLRL_TESTS_MATCH_ORACLE_HPP_

#include <vector>

#include "molrl/descriptors.hpp"

namespace molrl::test {

/// Exhaustive subgraph enumeration: assigns query atoms in index order to
/// every unused molecule atom and checks each query bond once both ends
/// are placed, using a dense bond matrix. Shares only the per-atom and
/// per-bond predicates with the library matcher.
class BruteForceMatcher {
 public:
  BruteForceMatcher(const MolGraph &g, const FunctionalGroupPattern &p)
      : g_(g), p_(p), n_(g.num_atoms()), bond_at_(n_ * n_, -1),
        mapping_(p.num_atoms(), -1), used_(n_, false) {
    for (int b = 0; b < g.num_bonds(); ++b) {
      bond_at_[g.bond(b).begin * n_ + g.bond(b).end] = b;
      bond_at_[g.bond(b).end * n_ + g.bond(b).begin] = b;
    }
  }

  bool any() { return n_ > 0 && assign(0); }

 private:
  bool bonds_ok(int q) const {
    for (const auto &qb : p_.bonds()) {
      if (qb.begin != q && qb.end != q) continue;
      const int a = mapping_[qb.begin], b = mapping_[qb.end];
      if (a < 0 || b < 0) continue;
      const int mb = bond_at_[a * n_ + b];
      if (mb < 0 || !bond_matches(qb.order, g_.bond(mb))) return false;
    }
    return true;
  }

  bool assign(int q) {
    if (q == p_.num_atoms()) return true;
    for (int a = 0; a < n_; ++a) {
      if (used_[a] || !atom_matches(p_.atom(q), g_, a)) continue;
      mapping_[q] = a;
      used_[a] = true;
      const bool ok = bonds_ok(q) && assign(q + 1);
      used_[a] = false;
      mapping_[q] = -1;
      if (ok) return true;
    }
    return false;
  }

  const MolGraph &g_;
  const FunctionalGroupPattern &p_;
  int n_;
  std::vector<int> bond_at_;
  std::vector<int> mapping_;
  std::vector<bool> used_;
};

inline bool brute_force_match(const MolGraph &g,
                              const FunctionalGroupPattern &p) {
  return BruteForceMatcher(g, p).any();
}

}  // namespace molrl::test

#endif  // MOLRL_TESTS_MATCH_ORACLE_HPP_
