//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Generates the shipped desk-scale corpus: small C/H/O molecules assembled
// from ring and chain scaffolds plus common oxygen substituents.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "molrl/descriptors.hpp"
#include "molrl/mol_graph.hpp"
#include "molrl/random.hpp"
#include "molrl/smiles.hpp"

namespace {

using molrl::BondOrder;

class Builder {
 public:
  explicit Builder(molrl::Rng &rng) : rng_(rng) {}

  int pick(int n) { return static_cast<int>(molrl::uniform01(rng_) * n); }
  bool chance(double p) { return molrl::uniform01(rng_) < p; }

  int add(int z, bool aromatic = false) {
    molrl::Atom a;
    a.atomic_number = z;
    a.aromatic = aromatic;
    const int idx = g_.add_atom(a);
    free_.push_back(aromatic ? 1 : (z == 6 ? 4 : 2));
    return idx;
  }

  bool bond(int a, int b, BondOrder order) {
    const int cost = order == BondOrder::kAromatic ? 0 : static_cast<int>(order);
    if (free_[a] < cost || free_[b] < cost) return false;
    if (g_.add_bond(a, b, order) < 0) return false;
    free_[a] -= cost;
    free_[b] -= cost;
    return true;
  }

  int atoms() const { return g_.num_atoms(); }
  int free(int a) const { return free_[a]; }
  const molrl::MolGraph &graph() const { return g_; }

  // Ring of `size` atoms; `hetero` lists ring positions holding oxygen.
  std::vector<int> ring(int size, std::vector<int> hetero = {},
                        int double_at = -1) {
    std::vector<int> idx;
    for (int i = 0; i < size; ++i) {
      const bool o = std::find(hetero.begin(), hetero.end(), i) != hetero.end();
      idx.push_back(add(o ? 8 : 6));
    }
    for (int i = 0; i < size; ++i)
      bond(idx[i], idx[(i + 1) % size],
           i == double_at ? BondOrder::kDouble : BondOrder::kSingle);
    return idx;
  }

  std::vector<int> aromatic_ring(int size, bool furan) {
    std::vector<int> idx;
    for (int i = 0; i < size; ++i)
      idx.push_back(add(furan && i == 0 ? 8 : 6, true));
    if (furan) free_[idx[0]] = 0;
    for (int i = 0; i < size; ++i)
      bond(idx[i], idx[(i + 1) % size], BondOrder::kAromatic);
    return idx;
  }

  std::vector<int> chain(int n) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      idx.push_back(add(6));
      if (i > 0) bond(idx[i - 1], idx[i], BondOrder::kSingle);
    }
    return idx;
  }

  std::vector<int> scaffold() {
    switch (pick(17)) {
      case 0: case 1: return chain(1 + pick(6));
      case 2: { auto c = chain(2 + pick(4)); upgrade(c, BondOrder::kDouble); return c; }
      case 3: { auto c = chain(2 + pick(3)); upgrade(c, BondOrder::kTriple); return c; }
      case 4: return ring(3 + pick(5));
      case 5: return ring(6, {}, 0);                        // cyclohexene
      case 6: case 7: return aromatic_ring(6, false);       // benzene
      case 8: return aromatic_ring(5, true);                // furan
      case 9: return ring(5, {0});                          // oxolane
      case 10: return ring(6, {0});                         // oxane
      case 11: return ring(3, {0});                         // epoxide
      case 12: return ring(5, {0, 2});                      // dioxolane
      case 13: case 14: {                                   // lactone
        auto r = ring(5 + pick(2), {0});
        const int o = add(8);
        bond(r[1], o, BondOrder::kDouble);
        return r;
      }
      case 15: {                                            // cyclic ketone
        auto r = ring(5 + pick(2));
        const int o = add(8);
        bond(r[0], o, BondOrder::kDouble);
        return r;
      }
      default: return ring(4, {0});                         // oxetane
    }
  }

  void upgrade(const std::vector<int> &c, BondOrder order) {
    const int at = pick(static_cast<int>(c.size()) - 1);
    const int b = g_.find_bond(c[at], c[at + 1]);
    const int extra = static_cast<int>(order) - 1;
    if (free_[c[at]] < extra || free_[c[at + 1]] < extra) return;
    g_.bond(b).order = order;
    free_[c[at]] -= extra;
    free_[c[at + 1]] -= extra;
  }

  // Hangs a substituent off `site`.
  void substituent(int site) {
    auto single = [&](int z) {
      const int a = add(z);
      bond(site, a, BondOrder::kSingle);
      return a;
    };
    switch (pick(16)) {
      case 0: case 1: single(6); break;                            // methyl
      case 2: { int a = single(6); int b = add(6); bond(a, b, BondOrder::kSingle); break; }
      case 3: { int a = single(6); bond(a, add(6), BondOrder::kSingle); bond(a, add(6), BondOrder::kSingle); break; }
      case 4: case 5: single(8); break;                            // hydroxy
      case 6: { int o = single(8); bond(o, add(6), BondOrder::kSingle); break; }  // methoxy
      case 7: { int c = single(6); bond(c, add(8), BondOrder::kDouble); break; }  // formyl
      case 8: { int c = single(6); bond(c, add(8), BondOrder::kDouble); bond(c, add(6), BondOrder::kSingle); break; }
      case 9: { int c = single(6); bond(c, add(8), BondOrder::kDouble); bond(c, add(8), BondOrder::kSingle); break; }
      case 10: { int c = single(6); bond(c, add(8), BondOrder::kDouble); int o = add(8); bond(c, o, BondOrder::kSingle); bond(o, add(6), BondOrder::kSingle); break; }
      case 11: { int o = single(8); int c = add(6); bond(o, c, BondOrder::kSingle); bond(c, add(8), BondOrder::kDouble); bond(c, add(6), BondOrder::kSingle); break; }
      case 12: { int c = single(6); bond(c, add(6), BondOrder::kDouble); break; }  // vinyl
      case 13: { int c = single(6); bond(c, add(6), BondOrder::kTriple); break; }  // ethynyl
      case 14: { int c = single(6); bond(c, add(8), BondOrder::kSingle); break; }  // hydroxymethyl
      default: { int c = single(6); int d = add(6); bond(c, d, BondOrder::kSingle); bond(d, add(6), BondOrder::kSingle); break; }
    }
  }

  std::vector<int> open_sites() const {
    std::vector<int> out;
    for (int i = 0; i < g_.num_atoms(); ++i)
      if (g_.atom(i).atomic_number == 6 && free_[i] >= 1) out.push_back(i);
    return out;
  }

 private:
  molrl::Rng &rng_;
  molrl::MolGraph g_;
  std::vector<int> free_;
};

}  // namespace

int main(int argc, char **argv) {
  CLI::App app("Generate the C/H/O training corpus");
  int count = 10000;
  std::uint64_t seed = 2026;
  int max_heavy = 13;
  std::string out_path = "corpus.smi";
  app.add_option("-n,--count", count, "number of distinct SMILES");
  app.add_option("--seed", seed);
  app.add_option("--max-heavy", max_heavy);
  app.add_option("-o,--out", out_path);
  CLI11_PARSE(app, argc, argv);

  molrl::Rng rng(seed);
  std::set<std::string> seen;
  std::vector<std::string> out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < count && attempts < count * 100) {
    ++attempts;
    Builder b(rng);
    b.scaffold();
    if (b.chance(0.15)) {
      // second scaffold joined by a single bond
      const auto left = b.open_sites();
      const int first = b.atoms();
      b.scaffold();
      std::vector<int> right;
      for (int s : b.open_sites())
        if (s >= first) right.push_back(s);
      if (left.empty() || right.empty()) continue;
      b.bond(left[b.pick(static_cast<int>(left.size()))],
             right[b.pick(static_cast<int>(right.size()))], BondOrder::kSingle);
    }
    const int subs = b.pick(4);
    for (int i = 0; i < subs; ++i) {
      const auto sites = b.open_sites();
      if (sites.empty()) break;
      b.substituent(sites[b.pick(static_cast<int>(sites.size()))]);
    }
    if (b.atoms() > max_heavy || b.graph().components().size() != 1) continue;
    const std::string smi = molrl::write_smiles(
        b.graph(), 0);
    try {
      const auto g = molrl::parse_smiles(smi);
      if (molrl::molecular_weight(g) >= 200.0) continue;
    } catch (const std::exception &) {
      continue;
    }
    if (seen.insert(smi).second) out.push_back(smi);
  }
  std::ofstream f(out_path);
  for (const auto &s : out) f << s << '\n';
  std::cerr << out.size() << " molecules after " << attempts << " attempts\n";
  return 0;
}
