//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molrl/elements.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace molrl {
namespace {

// clang-format off
constexpr std::array kElements = {
  ElementInfo{"H",   1,   1.008,   1, 1},
  ElementInfo{"He",  2,   4.0026,  0, 1},
  ElementInfo{"Li",  3,   6.94,    0, 2},
  ElementInfo{"Be",  4,   9.0122,  0, 2},
  ElementInfo{"B",   5,  10.81,    3, 2},
  ElementInfo{"C",   6,  12.011,   4, 2},
  ElementInfo{"N",   7,  14.007,   5, 2},
  ElementInfo{"O",   8,  15.999,   6, 2},
  ElementInfo{"F",   9,  18.998,   7, 2},
  ElementInfo{"Ne", 10,  20.180,   0, 2},
  ElementInfo{"Na", 11,  22.990,   0, 3},
  ElementInfo{"Mg", 12,  24.305,   0, 3},
  ElementInfo{"Al", 13,  26.982,   0, 3},
  ElementInfo{"Si", 14,  28.085,   4, 3},
  ElementInfo{"P",  15,  30.974,   5, 3},
  ElementInfo{"S",  16,  32.06,    6, 3},
  ElementInfo{"Cl", 17,  35.45,    7, 3},
  ElementInfo{"Ar", 18,  39.95,    0, 3},
  ElementInfo{"K",  19,  39.098,   0, 4},
  ElementInfo{"Ca", 20,  40.078,   0, 4},
  ElementInfo{"Ti", 22,  47.867,   0, 4},
  ElementInfo{"Cr", 24,  51.996,   0, 4},
  ElementInfo{"Mn", 25,  54.938,   0, 4},
  ElementInfo{"Fe", 26,  55.845,   0, 4},
  ElementInfo{"Co", 27,  58.933,   0, 4},
  ElementInfo{"Ni", 28,  58.693,   0, 4},
  ElementInfo{"Cu", 29,  63.546,   0, 4},
  ElementInfo{"Zn", 30,  65.38,    0, 4},
  ElementInfo{"Ge", 32,  72.630,   4, 4},
  ElementInfo{"As", 33,  74.922,   5, 4},
  ElementInfo{"Se", 34,  78.971,   6, 4},
  ElementInfo{"Br", 35,  79.904,   7, 4},
  ElementInfo{"Kr", 36,  83.798,   0, 4},
  ElementInfo{"Sr", 38,  87.62,    0, 5},
  ElementInfo{"Ag", 47, 107.87,    0, 5},
  ElementInfo{"Sn", 50, 118.71,    4, 5},
  ElementInfo{"Sb", 51, 121.76,    5, 5},
  ElementInfo{"Te", 52, 127.60,    6, 5},
  ElementInfo{"I",  53, 126.904,   7, 5},
  ElementInfo{"Xe", 54, 131.29,    0, 5},
  ElementInfo{"Ba", 56, 137.33,    0, 6},
  ElementInfo{"Pt", 78, 195.08,    0, 6},
  ElementInfo{"Au", 79, 196.97,    0, 6},
  ElementInfo{"Hg", 80, 200.59,    0, 6},
  ElementInfo{"Pb", 82, 207.2,     0, 6},
  ElementInfo{"Bi", 83, 208.98,    0, 6},
};
// clang-format on

}  // namespace

const ElementInfo *find_element(std::string_view symbol) {
  for (const auto &e : kElements)
    if (e.symbol == symbol) return &e;
  return nullptr;
}

const ElementInfo &element(int atomic_number) {
  for (const auto &e : kElements)
    if (e.atomic_number == atomic_number) return e;
  throw std::out_of_range("no element with atomic number " +
                          std::to_string(atomic_number));
}

std::vector<int> allowed_valences(const ElementInfo &info, int charge) {
  if (info.valence_electrons == 0) return {};
  if (info.atomic_number == 1) return {charge == 0 ? 1 : 0};

  // A charged atom behaves like its isoelectronic neighbour: N+ like C,
  // O- like F, C- like N.
  const int e = info.valence_electrons - charge;
  const bool hypervalent = info.period >= 3;
  if (e <= 0 || e >= 8) return {0};
  switch (e) {
    case 5:
      return hypervalent ? std::vector<int>{3, 5} : std::vector<int>{3};
    case 6:
      return hypervalent ? std::vector<int>{2, 4, 6} : std::vector<int>{2};
    case 7:
      return {1};
    default:
      // 1..4 valence electrons: one bond per electron.
      return {e};
  }
}

}  // namespace molrl
