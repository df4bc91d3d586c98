//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molrl/smiles.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <vector>

#include "molrl/elements.hpp"

namespace molrl {
namespace {

struct RingOpen {
  int atom;
  std::optional<BondOrder> order;
  std::size_t pos;
};

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::optional<BondOrder> bond_symbol(char c) {
  switch (c) {
    case '-':
    case '/':
    case '\\':
      return BondOrder::kSingle;
    case '=':
      return BondOrder::kDouble;
    case '#':
      return BondOrder::kTriple;
    case ':':
      return BondOrder::kAromatic;
    default:
      return std::nullopt;
  }
}

// Aromatic atoms of these elements contribute one electron to the pi system
// and therefore use one valence unit beyond their sigma bonds.
bool donates_pi_bond(int atomic_number) {
  return atomic_number == 5 || atomic_number == 6 || atomic_number == 7 ||
         atomic_number == 15;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  MolGraph run() {
    int prev = -1;
    std::optional<BondOrder> pending = std::nullopt;
    std::size_t pending_pos = 0;
    std::vector<std::pair<int, std::size_t>> branches;
    std::map<int, RingOpen> rings;

    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      const std::size_t here = pos_;
      if (c == '[' || std::isalpha(static_cast<unsigned char>(c)) || c == '*') {
        const int atom = c == '[' ? parse_bracket() : parse_organic();
        if (prev >= 0) {
          connect(prev, atom, pending, here);
        } else if (pending) {
          fail("bond without a preceding atom", pending_pos);
        }
        pending.reset();
        prev = atom;
      } else if (auto order = bond_symbol(c)) {
        if (prev < 0) fail("bond without a preceding atom", here);
        if (pending) fail("two consecutive bond symbols", here);
        pending = order;
        pending_pos = here;
        ++pos_;
      } else if (c == '(') {
        if (prev < 0) fail("branch without a preceding atom", here);
        if (pending) fail("bond symbol before '('", here);
        if (peek(1) == ')') fail("empty branch", here);
        if (peek(1) == '(' || peek(1) == '.' || is_digit(peek(1)))
          fail("branch must start with a bond or an atom", here + 1);
        branches.emplace_back(prev, here);
        ++pos_;
      } else if (c == ')') {
        if (branches.empty())
          throw SmilesError(SmilesErrorKind::kUnbalancedBranch, here,
                            "unmatched ')' at position " + std::to_string(here));
        if (pending) fail("dangling bond before ')'", pending_pos);
        prev = branches.back().first;
        branches.pop_back();
        ++pos_;
      } else if (is_digit(c) || c == '%') {
        if (prev < 0) fail("ring closure without a preceding atom", here);
        const int number = parse_ring_number();
        auto it = rings.find(number);
        if (it == rings.end()) {
          rings.emplace(number, RingOpen{prev, pending, here});
        } else {
          const RingOpen open = it->second;
          rings.erase(it);
          if (open.atom == prev) fail("ring closure to the same atom", here);
          if (open.order && pending && *open.order != *pending)
            fail("conflicting ring closure bond orders", here);
          std::optional<BondOrder> order = open.order ? open.order : pending;
          connect(open.atom, prev, order, here);
        }
        pending.reset();
      } else if (c == '.') {
        if (prev < 0 || pending) fail("misplaced '.'", here);
        prev = -1;
        ++pos_;
      } else {
        fail(std::string("unexpected character '") + c + "'", here);
      }
    }

    if (pending) fail("dangling bond at end of input", pending_pos);
    if (!branches.empty()) {
      const std::size_t p = branches.back().second;
      throw SmilesError(SmilesErrorKind::kUnbalancedBranch, p,
                        "unclosed '(' at position " + std::to_string(p));
    }
    if (!rings.empty()) {
      const int number = rings.begin()->first;
      throw SmilesError(SmilesErrorKind::kUnclosedRing,
                        static_cast<std::size_t>(number),
                        "ring closure " + std::to_string(number) +
                            " is never closed");
    }
    if (text_.empty()) return std::move(g_);
    finish();
    return std::move(g_);
  }

 private:
  [[noreturn]] void fail(const std::string &reason, std::size_t pos) const {
    throw SmilesError(SmilesErrorKind::kSyntax, pos,
                      reason + " (position " + std::to_string(pos) + ")");
  }

  char peek(std::size_t offset = 0) const {
    return pos_ + offset < text_.size() ? text_[pos_ + offset] : '\0';
  }

  void connect(int a, int b, std::optional<BondOrder> order, std::size_t pos) {
    const bool implicit = !order.has_value();
    if (!order) {
      order = g_.atom(a).aromatic && g_.atom(b).aromatic ? BondOrder::kAromatic
                                                         : BondOrder::kSingle;
    }
    const int idx = g_.add_bond(a, b, *order);
    if (idx < 0) fail("duplicate bond between the same atoms", pos);
    implicit_.resize(g_.num_bonds(), false);
    implicit_[idx] = implicit;
  }

  int parse_ring_number() {
    if (peek() == '%') {
      if (!is_digit(peek(1)) || !is_digit(peek(2)))
        fail("'%' must be followed by two digits", pos_);
      const int n = (peek(1) - '0') * 10 + (peek(2) - '0');
      pos_ += 3;
      return n;
    }
    return text_[pos_++] - '0';
  }

  int parse_organic() {
    Atom atom;
    const char c = peek();
    std::string symbol(1, c);
    if (c == 'C' && peek(1) == 'l') symbol = "Cl";
    if (c == 'B' && peek(1) == 'r') symbol = "Br";

    static constexpr std::string_view kAliphatic[] = {"B", "C",  "N",  "O", "P",
                                                      "S", "F", "Cl", "Br", "I"};
    static constexpr std::string_view kAromatic = "bcnops";
    if (std::find(std::begin(kAliphatic), std::end(kAliphatic), symbol) !=
        std::end(kAliphatic)) {
      atom.atomic_number = find_element(symbol)->atomic_number;
    } else if (kAromatic.find(c) != std::string_view::npos) {
      std::string upper(1, static_cast<char>(std::toupper(c)));
      atom.atomic_number = find_element(upper)->atomic_number;
      atom.aromatic = true;
    } else {
      fail("'" + symbol + "' is not an organic-subset atom", pos_);
    }
    pos_ += symbol.size();
    return g_.add_atom(atom);
  }

  int parse_int() {
    int v = 0;
    while (is_digit(peek())) v = v * 10 + (text_[pos_++] - '0');
    return v;
  }

  int parse_bracket() {
    const std::size_t open = pos_++;
    Atom atom;
    atom.bracket = true;
    if (is_digit(peek())) atom.isotope = parse_int();

    const char c = peek();
    if (c == '*') fail("wildcard atoms are not supported", pos_);
    if (std::islower(static_cast<unsigned char>(c))) {
      std::string two{c, peek(1)};
      std::string upper;
      if (two == "se" || two == "as") {
        upper = two;
        upper[0] = static_cast<char>(std::toupper(upper[0]));
        pos_ += 2;
      } else if (std::string_view("bcnops").find(c) != std::string_view::npos) {
        upper = std::string(1, static_cast<char>(std::toupper(c)));
        ++pos_;
      } else {
        fail(std::string("unknown aromatic symbol '") + c + "'", pos_);
      }
      atom.atomic_number = find_element(upper)->atomic_number;
      atom.aromatic = true;
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      const ElementInfo *info = nullptr;
      if (std::islower(static_cast<unsigned char>(peek(1)))) {
        info = find_element(std::string{c, peek(1)});
        if (info) pos_ += 2;
      }
      if (!info) {
        info = find_element(std::string(1, c));
        if (!info) fail(std::string("unknown element '") + c + "'", pos_);
        ++pos_;
      }
      atom.atomic_number = info->atomic_number;
    } else {
      fail("bracket atom without an element symbol", pos_);
    }

    // Chirality is accepted and ignored.
    if (peek() == '@') {
      while (peek() == '@') ++pos_;
      // Extended forms such as @TH1 or @OH12.
      if (std::isupper(static_cast<unsigned char>(peek())) && peek() != 'H') {
        while (std::isupper(static_cast<unsigned char>(peek()))) ++pos_;
        parse_int();
      }
    }

    if (peek() == 'H') {
      ++pos_;
      atom.explicit_h = is_digit(peek()) ? parse_int() : 1;
    }
    if (peek() == '+' || peek() == '-') {
      const char sign = text_[pos_++];
      int magnitude = 1;
      if (is_digit(peek())) {
        magnitude = parse_int();
      } else {
        while (peek() == sign) {
          ++magnitude;
          ++pos_;
        }
      }
      atom.charge = sign == '+' ? magnitude : -magnitude;
    }
    if (peek() == ':') {
      ++pos_;
      if (!is_digit(peek())) fail("atom class needs digits", pos_);
      parse_int();
    }
    if (peek() != ']') fail("unterminated bracket atom", open);
    ++pos_;
    return g_.add_atom(atom);
  }

  void finish() {
    g_.perceive_rings();
    for (int b = 0; b < g_.num_bonds(); ++b) {
      Bond &bond = g_.bond(b);
      if (bond.order == BondOrder::kAromatic && implicit_[b] && !bond.in_ring)
        bond.order = BondOrder::kSingle;
    }

    for (const Bond &bond : g_.bonds()) {
      if (bond.order != BondOrder::kAromatic) continue;
      if (!g_.atom(bond.begin).aromatic || !g_.atom(bond.end).aromatic)
        throw SmilesError(SmilesErrorKind::kAromaticity,
                          static_cast<std::size_t>(bond.begin),
                          "aromatic bond between non-aromatic atoms");
      if (!bond.in_ring)
        throw SmilesError(SmilesErrorKind::kAromaticity,
                          static_cast<std::size_t>(bond.begin),
                          "aromatic bond outside a ring");
    }

    for (int i = 0; i < g_.num_atoms(); ++i) {
      Atom &atom = g_.atom(i);
      int aromatic_bonds = 0;
      bool has_multiple = false;
      for (const auto &nb : g_.neighbors(i)) {
        const BondOrder o = g_.bond(nb.bond).order;
        aromatic_bonds += o == BondOrder::kAromatic;
        has_multiple |= o == BondOrder::kDouble || o == BondOrder::kTriple;
      }
      if (atom.aromatic && aromatic_bonds < 2)
        throw SmilesError(SmilesErrorKind::kAromaticity,
                          static_cast<std::size_t>(i),
                          "aromatic atom " + std::to_string(i) +
                              " is not part of an aromatic ring");

      const auto allowed =
          allowed_valences(element(atom.atomic_number), atom.charge);
      const int sum = bond_order_sum(g_, i);
      if (!atom.bracket) {
        const int used = sum + (atom.aromatic && !has_multiple &&
                                donates_pi_bond(atom.atomic_number));
        auto it = std::find_if(allowed.begin(), allowed.end(),
                               [used](int v) { return v >= used; });
        if (it == allowed.end()) valence_error(i, used);
        atom.implicit_h = *it - used;
      } else if (!allowed.empty()) {
        const int v = sum + atom.explicit_h;
        const bool ok =
            std::count(allowed.begin(), allowed.end(), v) > 0 ||
            (atom.aromatic && std::count(allowed.begin(), allowed.end(), v + 1));
        if (!ok) valence_error(i, v);
      }
    }
  }

  [[noreturn]] void valence_error(int atom, int valence) const {
    throw SmilesError(SmilesErrorKind::kValence, static_cast<std::size_t>(atom),
                      "atom " + std::to_string(atom) + " (" +
                          element_symbol(g_.atom(atom)) + ") has valence " +
                          std::to_string(valence));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  MolGraph g_;
  std::vector<bool> implicit_;
};

// ---------------------------------------------------------------- writer

bool organic_subset(const Atom &a) {
  if (a.bracket || a.charge != 0 || a.isotope != 0) return false;
  switch (a.atomic_number) {
    case 5: case 6: case 7: case 8: case 15: case 16:
      return true;
    case 9: case 17: case 35: case 53:
      return !a.aromatic;
    default:
      return false;
  }
}

std::string atom_text(const Atom &a) {
  if (organic_subset(a)) return element_symbol(a);
  std::string s = "[";
  if (a.isotope) s += std::to_string(a.isotope);
  s += element_symbol(a);
  if (a.total_h() == 1) s += "H";
  if (a.total_h() > 1) s += "H" + std::to_string(a.total_h());
  if (a.charge > 0) s += "+";
  if (a.charge < 0) s += "-";
  if (std::abs(a.charge) > 1) s += std::to_string(std::abs(a.charge));
  return s + "]";
}

std::string bond_text(const MolGraph &g, const Bond &b) {
  const bool both_aromatic = g.atom(b.begin).aromatic && g.atom(b.end).aromatic;
  switch (b.order) {
    case BondOrder::kSingle:
      return both_aromatic ? "-" : "";
    case BondOrder::kDouble:
      return "=";
    case BondOrder::kTriple:
      return "#";
    case BondOrder::kAromatic:
      return both_aromatic ? "" : ":";
  }
  return "";
}

std::string ring_label(int n) {
  return n < 10 ? std::to_string(n) : "%" + std::to_string(n);
}

class Writer {
 public:
  Writer(const MolGraph &g, std::optional<std::uint64_t> seed)
      : g_(g), rng_(seed.value_or(0)), shuffle_(seed.has_value()),
        visited_(g.num_atoms(), false), closures_(g.num_atoms()),
        children_(g.num_atoms()), parent_bond_(g.num_atoms(), -1) {}

  std::string write(int root) {
    std::vector<int> starts;
    if (root >= 0 && root < g_.num_atoms()) starts.push_back(root);
    for (int i = 0; i < g_.num_atoms(); ++i) starts.push_back(i);
    std::string out;
    for (int s : starts) {
      if (visited_[s]) continue;
      plan(s, -1);
      if (!out.empty()) out += '.';
      emit(s, out);
    }
    return out;
  }

 private:
  void plan(int u, int parent_bond) {
    visited_[u] = true;
    parent_bond_[u] = parent_bond;
    std::vector<Neighbor> nbs(g_.neighbors(u).begin(), g_.neighbors(u).end());
    if (shuffle_) std::shuffle(nbs.begin(), nbs.end(), rng_);
    for (const auto &nb : nbs) {
      if (nb.bond == parent_bond) continue;
      if (!visited_[nb.atom]) {
        children_[u].push_back(nb.atom);
        plan(nb.atom, nb.bond);
      } else if (std::find(closed_.begin(), closed_.end(), nb.bond) ==
                 closed_.end()) {
        // Back edge to an ancestor: the digit opens at the ancestor.
        closed_.push_back(nb.bond);
        closures_[nb.atom].push_back(nb.bond);
        closures_[u].push_back(nb.bond);
      }
    }
  }

  void emit(int u, std::string &out) {
    if (parent_bond_[u] >= 0) out += bond_text(g_, g_.bond(parent_bond_[u]));
    out += atom_text(g_.atom(u));
    for (int b : closures_[u]) {
      auto it = open_.find(b);
      if (it == open_.end()) {
        int label = 1;
        while (std::count(in_use_.begin(), in_use_.end(), label)) ++label;
        in_use_.push_back(label);
        open_.emplace(b, label);
        out += bond_text(g_, g_.bond(b)) + ring_label(label);
      } else {
        out += ring_label(it->second);
        in_use_.erase(std::find(in_use_.begin(), in_use_.end(), it->second));
        open_.erase(it);
      }
    }
    const auto &kids = children_[u];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const bool branch = i + 1 < kids.size();
      if (branch) out += '(';
      emit(kids[i], out);
      if (branch) out += ')';
    }
  }

  const MolGraph &g_;
  std::mt19937_64 rng_;
  bool shuffle_;
  std::vector<bool> visited_;
  std::vector<std::vector<int>> closures_;
  std::vector<std::vector<int>> children_;
  std::vector<int> parent_bond_;
  std::vector<int> closed_;
  std::map<int, int> open_;
  std::vector<int> in_use_;
};

}  // namespace

MolGraph parse_smiles(std::string_view text) { return Parser(text).run(); }

Validity is_valid(std::string_view text) {
  try {
    parse_smiles(text);
    return {true, std::nullopt, {}};
  } catch (const SmilesError &e) {
    return {false, e.kind(), e.what()};
  }
}

std::string write_smiles(const MolGraph &g, int root,
                         std::optional<std::uint64_t> seed) {
  return Writer(g, seed).write(root);
}

}  // namespace molrl
