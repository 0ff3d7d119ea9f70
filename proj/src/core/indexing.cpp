#include "moments/core/indexing.hpp"

#include <algorithm>

#include "moments/errors.hpp"

namespace moments {

SubsystemIndex subsystem_index(const RegisterLayout& layout, std::span<const std::size_t> targets) {
  const std::size_t n = layout.size();
  std::vector<bool> is_target(n, false);
  for (std::size_t t : targets) {
    if (t >= n) throw LayoutError("target register index out of range");
    if (is_target[t]) throw LayoutError("target register listed twice");
    is_target[t] = true;
  }

  std::vector<std::size_t> strides(n);
  for (std::size_t i = 0; i < n; ++i) strides[i] = layout.stride(i);

  SubsystemIndex out;

  std::size_t sub_dim = 1;
  for (std::size_t t : targets) sub_dim *= layout[t].dimension;
  out.offsets.resize(sub_dim);
  for (std::size_t j = 0; j < sub_dim; ++j) {
    std::size_t rem = j;
    std::size_t off = 0;
    for (std::size_t q = targets.size(); q-- > 0;) {
      const std::size_t d = layout[targets[q]].dimension;
      off += (rem % d) * strides[targets[q]];
      rem /= d;
    }
    out.offsets[j] = off;
  }

  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_target[i]) rest.push_back(i);
  }
  std::size_t rest_dim = 1;
  for (std::size_t r : rest) rest_dim *= layout[r].dimension;
  out.bases.resize(rest_dim);
  for (std::size_t k = 0; k < rest_dim; ++k) {
    std::size_t rem = k;
    std::size_t base = 0;
    for (std::size_t q = rest.size(); q-- > 0;) {
      const std::size_t d = layout[rest[q]].dimension;
      base += (rem % d) * strides[rest[q]];
      rem /= d;
    }
    out.bases[k] = base;
  }
  return out;
}

std::vector<std::size_t> digits_of(const RegisterLayout& layout, std::size_t flat) {
  std::vector<std::size_t> digits(layout.size());
  for (std::size_t i = layout.size(); i-- > 0;) {
    digits[i] = flat % layout[i].dimension;
    flat /= layout[i].dimension;
  }
  return digits;
}

}  // namespace moments
