//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLRL_ELEMENTS_HPP_
#define MOLRL_ELEMENTS_HPP_

#include <string_view>
#include <vector>

namespace molrl {

struct ElementInfo {
  std::string_view symbol;
  int atomic_number;
  // Standard atomic weight, g/mol.
  double weight;
  // Valence-shell electrons for main-group elements with a valence model;
  // 0 means "no valence rule" (metals and the like).
  int valence_electrons;
  int period;
};

const ElementInfo *find_element(std::string_view symbol);
const ElementInfo &element(int atomic_number);

/// Allowed total valences for an atom of this element carrying `charge`.
/// Empty when the element has no valence model (any valence is accepted).
std::vector<int> allowed_valences(const ElementInfo &info, int charge);

}  // namespace molrl

#endif  // MOLRL_ELEMENTS_HPP_
