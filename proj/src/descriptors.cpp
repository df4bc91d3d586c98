//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molrl/descriptors.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "molrl/elements.hpp"
#include "molrl/error.hpp"

namespace molrl {

double molecular_weight(const MolGraph &g) {
  const double hydrogen = element(1).weight;
  double mw = 0.0;
  for (const Atom &a : g.atoms()) {
    const ElementInfo *info = nullptr;
    try {
      info = &element(a.atomic_number);
    } catch (const std::out_of_range &) {
      throw DataError("unknown element with atomic number " +
                      std::to_string(a.atomic_number));
    }
    mw += info->weight + hydrogen * a.total_h();
  }
  return mw;
}

// ------------------------------------------------------- pattern parsing

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

class PatternParser {
 public:
  explicit PatternParser(std::string_view text) : text_(text) {}

  void run(std::vector<AtomQuery> &atoms, std::vector<QueryBond> &bonds) {
    int prev = -1;
    std::optional<BondQuery> pending;
    std::vector<int> branches;
    std::map<int, std::pair<int, std::optional<BondQuery>>> rings;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (auto b = bond_symbol(c)) {
        if (prev < 0 || pending) fail("misplaced bond symbol");
        pending = b;
        ++pos_;
      } else if (c == '(') {
        if (prev < 0 || pending) fail("misplaced '('");
        branches.push_back(prev);
        ++pos_;
      } else if (c == ')') {
        if (branches.empty() || pending) fail("unbalanced ')'");
        prev = branches.back();
        branches.pop_back();
        ++pos_;
      } else if (is_digit(c)) {
        if (prev < 0) fail("ring digit without an atom");
        const int d = c - '0';
        ++pos_;
        auto it = rings.find(d);
        if (it == rings.end()) {
          rings[d] = {prev, pending};
        } else {
          auto order = it->second.second ? it->second.second : pending;
          add_bond(atoms, bonds, it->second.first, prev, order);
          rings.erase(it);
        }
        pending.reset();
      } else {
        atoms.push_back(c == '[' ? parse_bracket() : parse_simple());
        const int idx = static_cast<int>(atoms.size()) - 1;
        if (prev >= 0) add_bond(atoms, bonds, prev, idx, pending);
        else if (pending) fail("bond without a preceding atom");
        pending.reset();
        prev = idx;
      }
    }
    if (pending || !branches.empty() || !rings.empty())
      fail("incomplete pattern");
    if (atoms.empty()) fail("empty pattern");
  }

 private:
  [[noreturn]] void fail(const std::string &why) const {
    throw DataError("bad functional-group pattern '" + std::string(text_) +
                    "': " + why);
  }

  static std::optional<BondQuery> bond_symbol(char c) {
    switch (c) {
      case '-': return BondQuery::kSingle;
      case '=': return BondQuery::kDouble;
      case '#': return BondQuery::kTriple;
      case ':': return BondQuery::kAromatic;
      case '~': return BondQuery::kAny;
      default: return std::nullopt;
    }
  }

  static bool requires_aromatic(const AtomQuery &q) {
    return std::any_of(q.primitives.begin(), q.primitives.end(),
                       [](const AtomPrimitive &p) {
                         return !p.negate &&
                                ((p.kind == AtomPrimitive::Kind::kElement &&
                                  p.aromatic) ||
                                 p.kind == AtomPrimitive::Kind::kAromatic);
                       });
  }

  void add_bond(const std::vector<AtomQuery> &atoms,
                std::vector<QueryBond> &bonds, int a, int b,
                std::optional<BondQuery> order) {
    if (a == b) fail("self bond");
    for (const auto &qb : bonds)
      if ((qb.begin == a && qb.end == b) || (qb.begin == b && qb.end == a))
        fail("duplicate bond");
    if (!order) {
      order = requires_aromatic(atoms[a]) && requires_aromatic(atoms[b])
                  ? BondQuery::kAromatic
                  : BondQuery::kSingleOrAromatic;
    }
    bonds.push_back({a, b, *order});
  }

  std::optional<AtomPrimitive> element_primitive(std::string_view sym) {
    AtomPrimitive p;
    p.kind = AtomPrimitive::Kind::kElement;
    if (std::islower(static_cast<unsigned char>(sym[0]))) {
      std::string upper(sym);
      upper[0] = static_cast<char>(std::toupper(upper[0]));
      const ElementInfo *info = find_element(upper);
      if (!info) return std::nullopt;
      p.value = info->atomic_number;
      p.aromatic = true;
    } else {
      const ElementInfo *info = find_element(sym);
      if (!info) return std::nullopt;
      p.value = info->atomic_number;
    }
    return p;
  }

  AtomQuery parse_simple() {
    const char c = text_[pos_];
    AtomPrimitive p;
    if (c == '*') {
      ++pos_;
      return AtomQuery{{p}};
    }
    if (c == 'a' || c == 'A') {
      ++pos_;
      p.kind = c == 'a' ? AtomPrimitive::Kind::kAromatic
                        : AtomPrimitive::Kind::kAliphatic;
      return AtomQuery{{p}};
    }
    std::string sym(1, c);
    if ((c == 'C' && peek(1) == 'l') || (c == 'B' && peek(1) == 'r'))
      sym += peek(1);
    static constexpr std::string_view kAllowed[] = {
        "B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I",
        "b", "c", "n", "o", "p", "s"};
    if (std::find(std::begin(kAllowed), std::end(kAllowed), sym) ==
        std::end(kAllowed))
      fail("unknown atom '" + sym + "'");
    pos_ += sym.size();
    return AtomQuery{{*element_primitive(sym)}};
  }

  char peek(std::size_t offset) const {
    return pos_ + offset < text_.size() ? text_[pos_ + offset] : '\0';
  }

  AtomQuery parse_bracket() {
    const std::size_t close = text_.find(']', pos_);
    if (close == std::string_view::npos) fail("unterminated '['");
    const std::string_view body = text_.substr(pos_ + 1, close - pos_ - 1);
    pos_ = close + 1;
    AtomQuery q;
    std::size_t start = 0;
    while (start <= body.size()) {
      std::size_t end = body.find(';', start);
      if (end == std::string_view::npos) end = body.size();
      q.primitives.push_back(parse_primitive(body.substr(start, end - start)));
      start = end + 1;
    }
    return q;
  }

  AtomPrimitive parse_primitive(std::string_view s) {
    AtomPrimitive p;
    if (!s.empty() && s[0] == '!') {
      p.negate = true;
      s.remove_prefix(1);
    }
    if (s.empty()) fail("empty primitive");
    auto number = [&](std::string_view digits) {
      if (digits.empty()) return -1;
      int v = 0;
      for (char d : digits) {
        if (!is_digit(d)) return -2;
        v = v * 10 + (d - '0');
      }
      return v;
    };
    const char head = s[0];
    const int n = number(s.substr(1));
    using Kind = AtomPrimitive::Kind;
    if (s == "*") {
      p.kind = Kind::kAny;
    } else if (s == "a") {
      p.kind = Kind::kAromatic;
    } else if (s == "A") {
      p.kind = Kind::kAliphatic;
    } else if (s == "R") {
      p.kind = Kind::kInRing;
    } else if (head == '#' && n >= 0) {
      p.kind = Kind::kAtomicNumber;
      p.value = n;
    } else if ((head == 'H' || head == 'D' || head == 'X') && n != -2) {
      p.kind = head == 'H'   ? Kind::kTotalH
               : head == 'D' ? Kind::kHeavyDegree
                             : Kind::kConnectivity;
      p.value = n < 0 ? 1 : n;
    } else if (auto e = element_primitive(s)) {
      e->negate = p.negate;
      return *e;
    } else {
      fail("unknown primitive '" + std::string(s) + "'");
    }
    return p;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

FunctionalGroupPattern FunctionalGroupPattern::parse(
    int id, std::string name, std::string_view expression) {
  FunctionalGroupPattern p;
  p.id_ = id;
  p.name_ = std::move(name);
  p.expression_ = std::string(expression);
  PatternParser(expression).run(p.atoms_, p.bonds_);

  // Query graphs must be connected.
  std::vector<int> seen{0};
  std::vector<bool> mark(p.atoms_.size(), false);
  mark[0] = true;
  for (std::size_t head = 0; head < seen.size(); ++head) {
    for (const auto &b : p.bonds_) {
      for (auto [u, v] : {std::pair{b.begin, b.end}, std::pair{b.end, b.begin}}) {
        if (u == seen[head] && !mark[v]) {
          mark[v] = true;
          seen.push_back(v);
        }
      }
    }
  }
  if (seen.size() != p.atoms_.size())
    throw DataError("functional-group pattern '" + p.expression_ +
                    "' is not connected");
  return p;
}

int FunctionalGroupPattern::degree(int atom) const {
  return static_cast<int>(std::count_if(
      bonds_.begin(), bonds_.end(),
      [atom](const QueryBond &b) { return b.begin == atom || b.end == atom; }));
}

// ------------------------------------------------------------- matching

bool atom_matches(const AtomQuery &query, const MolGraph &g, int atom) {
  const Atom &a = g.atom(atom);
  for (const AtomPrimitive &p : query.primitives) {
    bool ok = true;
    switch (p.kind) {
      using Kind = AtomPrimitive::Kind;
      case Kind::kAny: ok = true; break;
      case Kind::kElement:
        ok = a.atomic_number == p.value && a.aromatic == p.aromatic;
        break;
      case Kind::kAtomicNumber: ok = a.atomic_number == p.value; break;
      case Kind::kAromatic: ok = a.aromatic; break;
      case Kind::kAliphatic: ok = !a.aromatic; break;
      case Kind::kTotalH: ok = a.total_h() == p.value; break;
      case Kind::kHeavyDegree: ok = g.degree(atom) == p.value; break;
      case Kind::kConnectivity:
        ok = g.degree(atom) + a.total_h() == p.value;
        break;
      case Kind::kInRing: ok = g.in_ring(atom); break;
    }
    if (ok == p.negate) return false;
  }
  return true;
}

bool bond_matches(BondQuery query, const Bond &bond) {
  switch (query) {
    case BondQuery::kSingle: return bond.order == BondOrder::kSingle;
    case BondQuery::kDouble: return bond.order == BondOrder::kDouble;
    case BondQuery::kTriple: return bond.order == BondOrder::kTriple;
    case BondQuery::kAromatic: return bond.order == BondOrder::kAromatic;
    case BondQuery::kAny: return true;
    case BondQuery::kSingleOrAromatic:
      return bond.order == BondOrder::kSingle ||
             bond.order == BondOrder::kAromatic;
  }
  return false;
}

namespace {

// Backtracking over a breadth-first ordering of the query so that every
// query atom after the first is adjacent to an already mapped one; its
// candidates are then the neighbours of that mapped atom.
class Matcher {
 public:
  Matcher(const MolGraph &g, const FunctionalGroupPattern &p)
      : g_(g), p_(p), mapping_(p.num_atoms(), -1), used_(g.num_atoms(), false) {
    const int n = p.num_atoms();
    std::vector<bool> placed(n, false);
    order_.push_back(0);
    parent_.push_back(-1);
    placed[0] = true;
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const int u = order_[head];
      for (const auto &b : p.bonds()) {
        const int v = b.begin == u ? b.end : b.end == u ? b.begin : -1;
        if (v >= 0 && !placed[v]) {
          placed[v] = true;
          order_.push_back(v);
          parent_.push_back(u);
        }
      }
    }
    for (int q = 0; q < n; ++q) query_degree_.push_back(p.degree(q));
  }

  bool run() { return extend(0); }

 private:
  bool try_atom(std::size_t k, int q, int cand) {
    if (used_[cand] || g_.degree(cand) < query_degree_[q] ||
        !atom_matches(p_.atom(q), g_, cand))
      return false;
    for (const auto &b : p_.bonds()) {
      const int other = b.begin == q ? b.end : b.end == q ? b.begin : -1;
      if (other < 0 || mapping_[other] < 0) continue;
      const int mb = g_.find_bond(cand, mapping_[other]);
      if (mb < 0 || !bond_matches(b.order, g_.bond(mb))) return false;
    }
    mapping_[q] = cand;
    used_[cand] = true;
    const bool found = extend(k + 1);
    mapping_[q] = -1;
    used_[cand] = false;
    return found;
  }

  bool extend(std::size_t k) {
    if (k == order_.size()) return true;
    const int q = order_[k];
    if (parent_[k] < 0) {
      for (int cand = 0; cand < g_.num_atoms(); ++cand)
        if (try_atom(k, q, cand)) return true;
      return false;
    }
    for (const auto &nb : g_.neighbors(mapping_[parent_[k]]))
      if (try_atom(k, q, nb.atom)) return true;
    return false;
  }

  const MolGraph &g_;
  const FunctionalGroupPattern &p_;
  std::vector<int> order_;
  std::vector<int> parent_;
  std::vector<int> query_degree_;
  std::vector<int> mapping_;
  std::vector<bool> used_;
};

}  // namespace

bool match_group(const MolGraph &g, const FunctionalGroupPattern &pattern) {
  if (g.empty() || pattern.num_atoms() > g.num_atoms()) return false;
  return Matcher(g, pattern).run();
}

// -------------------------------------------------------------- catalog

namespace {

constexpr std::string_view kBuiltinCatalog = R"(# Functional-group catalog: id | name | pattern
#
# Pattern notation (SMILES-like):
#   C c O o ...   aliphatic (uppercase) / aromatic (lowercase) element
#   * a A         any atom / any aromatic atom / any aliphatic atom
#   - = # : ~     single, double, triple, aromatic, any bond; an unwritten
#                 bond is aromatic between two aromatic atoms and
#                 single-or-aromatic otherwise
#   ( ) 1-9       branches and ring closures
#   [p;q;...]     conjunction of primitives, each optionally negated by '!':
#                 element symbol, #n atomic number, a, A, Hn total H count,
#                 Dn heavy-atom degree, Xn total connections, R in a ring
#
# Presence of a group means at least one match anywhere in the molecule.
1 | benzene | c1ccccc1
2 | aldehyde | [C;H1](=O)[#6]
3 | ketone | [#6]C(=O)[#6]
4 | ether | [#6]O[#6]
5 | ester | [#6]C(=O)O[#6]
6 | carboxylic_acid | C(=O)[O;H1]
7 | primary_alcohol | [#6][C;H2][O;H1]
8 | secondary_alcohol | [#6][C;H1]([#6])[O;H1]
9 | tertiary_alcohol | [#6][C;H0]([#6])([#6])[O;H1]
10 | alkene | C=C
11 | alkyne | C#C
12 | lactone | [C;R](=O)[O;R]
13 | phenol | c[O;H1]
14 | furan | o1cccc1
15 | allylic_oxidation_site | C=C-[C;!H0]
16 | acetal | [#6]O[C;X4]O[#6]
17 | epoxide | C1OC1
18 | methyl | [C;H3]*
19 | unbranched_chain | [C;D2;!R]-[C;D2;!R]-[C;D2;!R]-[C;D2;!R]
20 | five_membered_ring | *1~*~*~*~*~1
)";

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

const FunctionalGroupCatalog &FunctionalGroupCatalog::builtin() {
  static const FunctionalGroupCatalog catalog = from_text(kBuiltinCatalog);
  return catalog;
}

FunctionalGroupCatalog FunctionalGroupCatalog::from_text(std::string_view text) {
  FunctionalGroupCatalog c;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto p1 = t.find('|');
    const auto p2 = p1 == std::string::npos ? p1 : t.find('|', p1 + 1);
    if (p2 == std::string::npos)
      throw DataError("catalog line " + std::to_string(line_no) +
                      ": expected 'id | name | pattern'");
    int id = 0;
    try {
      id = std::stoi(trim(t.substr(0, p1)));
    } catch (const std::exception &) {
      throw DataError("catalog line " + std::to_string(line_no) +
                      ": bad id");
    }
    c.patterns_.push_back(FunctionalGroupPattern::parse(
        id, trim(t.substr(p1 + 1, p2 - p1 - 1)), trim(t.substr(p2 + 1))));
  }
  std::sort(c.patterns_.begin(), c.patterns_.end(),
            [](const auto &a, const auto &b) { return a.id() < b.id(); });
  if (static_cast<int>(c.patterns_.size()) != kSize)
    throw DataError("catalog must hold exactly 20 patterns");
  for (int i = 0; i < kSize; ++i)
    if (c.patterns_[i].id() != i + 1)
      throw DataError("catalog ids must be 1..20, each exactly once");
  return c;
}

FunctionalGroupCatalog FunctionalGroupCatalog::load(
    const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open catalog " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

const FunctionalGroupPattern &FunctionalGroupCatalog::get(int id) const {
  if (!contains(id))
    throw DataError("unknown functional group id " + std::to_string(id));
  return patterns_[id - 1];
}

bool FunctionalGroupCatalog::contains(int id) const {
  return id >= 1 && id <= static_cast<int>(patterns_.size());
}

// ---------------------------------------------------------- fingerprint

int Fingerprint::count() const {
  int n = 0;
  for (auto w : words) n += std::popcount(w);
  return n;
}

namespace {

char bond_char(BondOrder o) {
  switch (o) {
    case BondOrder::kSingle: return '-';
    case BondOrder::kDouble: return '=';
    case BondOrder::kTriple: return '#';
    case BondOrder::kAromatic: return ':';
  }
  return '?';
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string path_label(const MolGraph &g, const std::vector<int> &atoms) {
  auto render = [&](auto first, auto last) {
    std::string s;
    int prev = -1;
    for (auto it = first; it != last; ++it) {
      if (prev >= 0) s += bond_char(g.bond(g.find_bond(prev, *it)).order);
      s += element_symbol(g.atom(*it));
      prev = *it;
    }
    return s;
  };
  std::string fwd = render(atoms.begin(), atoms.end());
  std::string rev = render(atoms.rbegin(), atoms.rend());
  return std::min(fwd, rev);
}

int path_bit(std::string_view label, int width) {
  return static_cast<int>(fnv1a(label) % static_cast<std::uint64_t>(width));
}

Fingerprint fingerprint(const MolGraph &g, int width, int max_path_bonds) {
  if (width <= 0 || width % 64 != 0)
    throw std::invalid_argument("fingerprint width must be a positive multiple of 64");
  Fingerprint fp;
  fp.width = width;
  fp.max_path_bonds = max_path_bonds;
  fp.words.assign(width / 64, 0);

  std::vector<int> path;
  std::vector<bool> on_path(g.num_atoms(), false);
  auto walk = [&](auto &&self, int u) -> void {
    path.push_back(u);
    on_path[u] = true;
    // Each path is reached from both ends; only keep one direction.
    if (path.size() == 1 || path.front() < path.back())
      fp.set(path_bit(path_label(g, path), width));
    if (static_cast<int>(path.size()) <= max_path_bonds) {
      for (const auto &nb : g.neighbors(u))
        if (!on_path[nb.atom]) self(self, nb.atom);
    }
    on_path[u] = false;
    path.pop_back();
  };
  for (int s = 0; s < g.num_atoms(); ++s) walk(walk, s);
  return fp;
}

double tanimoto(const Fingerprint &a, const Fingerprint &b) {
  if (a.width != b.width || a.words.size() != b.words.size())
    throw std::invalid_argument("fingerprint width mismatch");
  int both = 0, either = 0;
  for (std::size_t i = 0; i < a.words.size(); ++i) {
    both += std::popcount(a.words[i] & b.words[i]);
    either += std::popcount(a.words[i] | b.words[i]);
  }
  return either == 0 ? 1.0 : static_cast<double>(both) / either;
}

}  // namespace molrl
