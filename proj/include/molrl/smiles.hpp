//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLRL_SMILES_HPP_
#define MOLRL_SMILES_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "molrl/error.hpp"
#include "molrl/mol_graph.hpp"

namespace molrl {

/// Parses a SMILES string into a validated molecular graph.
///
/// Supported grammar: organic-subset atoms (B C N O P S F Cl Br I and
/// aromatic b c n o p s), bracket atoms with isotope, chirality (ignored),
/// hydrogen count and charge, bonds - = # : / \ (the last two read as
/// single), branches, ring closures 1-9 and %nn, and '.' separated
/// components. Aromaticity is checked structurally: each aromatic atom needs
/// at least two aromatic ring bonds; no kekulization is attempted.
///
/// Throws SmilesError on any failure.
MolGraph parse_smiles(std::string_view text);

struct Validity {
  bool valid = false;
  std::optional<SmilesErrorKind> kind;
  std::string reason;

  explicit operator bool() const { return valid; }
};

/// Total version of parse_smiles: never throws.
Validity is_valid(std::string_view text);

/// Writes a (non-canonical) SMILES for the graph, starting the depth-first
/// walk of each component at its lowest atom index, or at `root` for the
/// component containing it. Neighbor visiting order follows bond creation
/// order unless `seed` is given, in which case it is shuffled.
std::string write_smiles(const MolGraph &g, int root = 0,
                         std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace molrl

#endif  // MOLRL_SMILES_HPP_
