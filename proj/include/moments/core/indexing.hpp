#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "moments/core/layout.hpp"

namespace moments {

// Flat-index bookkeeping for acting on a subset of registers.
//
// For target registers (t_0, ..., t_{m-1}) of a layout, `offsets[j]` is the
// flat-index contribution of sub-index j (decomposed with t_0 slowest), and
// `bases[r]` is the flat index of rest configuration r (rest registers in
// layout order, target digits zero). Every flat index is bases[r] + offsets[j]
// for exactly one (r, j).
struct SubsystemIndex {
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> bases;
};

SubsystemIndex subsystem_index(const RegisterLayout& layout, std::span<const std::size_t> targets);

// Digits of a flat index, register 0 first.
std::vector<std::size_t> digits_of(const RegisterLayout& layout, std::size_t flat);

}  // namespace moments
