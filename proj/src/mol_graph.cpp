//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molrl/mol_graph.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "molrl/elements.hpp"

namespace molrl {

int MolGraph::add_atom(const Atom &atom) {
  atoms_.push_back(atom);
  adjacency_.emplace_back();
  return num_atoms() - 1;
}

int MolGraph::add_bond(int begin, int end, BondOrder order) {
  if (begin == end || find_bond(begin, end) >= 0) return -1;
  const int idx = num_bonds();
  bonds_.push_back(Bond{begin, end, order, false});
  adjacency_[begin].push_back({end, idx});
  adjacency_[end].push_back({begin, idx});
  return idx;
}

int MolGraph::find_bond(int a, int b) const {
  for (const auto &nb : adjacency_[a])
    if (nb.atom == b) return nb.bond;
  return -1;
}

bool MolGraph::in_ring(int atom) const {
  return std::any_of(adjacency_[atom].begin(), adjacency_[atom].end(),
                     [this](const Neighbor &nb) {
                       return bonds_[nb.bond].in_ring;
                     });
}

void MolGraph::perceive_rings() {
  // Tarjan bridge finding; every non-bridge bond lies on a cycle.
  const int n = num_atoms();
  std::vector<int> order(n, -1), low(n, 0);
  int counter = 0;
  for (auto &b : bonds_) b.in_ring = true;

  std::function<void(int, int)> dfs = [&](int u, int parent_bond) {
    order[u] = low[u] = counter++;
    for (const auto &nb : adjacency_[u]) {
      if (nb.bond == parent_bond) continue;
      if (order[nb.atom] < 0) {
        dfs(nb.atom, nb.bond);
        low[u] = std::min(low[u], low[nb.atom]);
        if (low[nb.atom] > order[u]) bonds_[nb.bond].in_ring = false;
      } else {
        low[u] = std::min(low[u], order[nb.atom]);
      }
    }
  };
  for (int i = 0; i < n; ++i)
    if (order[i] < 0) dfs(i, -1);
}

std::vector<std::vector<int>> MolGraph::components() const {
  std::vector<std::vector<int>> result;
  std::vector<bool> seen(atoms_.size(), false);
  for (int s = 0; s < num_atoms(); ++s) {
    if (seen[s]) continue;
    std::vector<int> comp{s};
    seen[s] = true;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (const auto &nb : adjacency_[comp[head]]) {
        if (!seen[nb.atom]) {
          seen[nb.atom] = true;
          comp.push_back(nb.atom);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    result.push_back(std::move(comp));
  }
  return result;
}

int bond_order_sum(const MolGraph &g, int atom) {
  int sum = 0;
  for (const auto &nb : g.neighbors(atom)) {
    const BondOrder o = g.bond(nb.bond).order;
    sum += o == BondOrder::kAromatic ? 1 : static_cast<int>(o);
  }
  return sum;
}

std::string element_symbol(const Atom &atom) {
  std::string s(element(atom.atomic_number).symbol);
  if (atom.aromatic)
    s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  return s;
}

}  // namespace molrl
