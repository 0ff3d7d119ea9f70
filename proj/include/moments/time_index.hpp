#pragma once

#include <compare>
#include <cstddef>
#include <string>

namespace moments {

// Discrete moment of time.
struct TimeIndex {
  std::size_t k = 0;

  constexpr TimeIndex() = default;
  constexpr explicit TimeIndex(std::size_t moment) : k(moment) {}

  constexpr auto operator<=>(const TimeIndex&) const = default;
};

inline std::string to_string(TimeIndex t) { return "@" + std::to_string(t.k); }

}  // namespace moments
