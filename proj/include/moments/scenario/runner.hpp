#pragma once

#include <cstdint>
#include <optional>

#include "moments/history/multi_chain.hpp"
#include "moments/scenario/scenario.hpp"

namespace moments::scenario {

// Strand registers are named "<system>@<first moment>"; recorded outcomes
// are labeled "<system>@<moment>" ("#2", "#3" on repeats) and meter readings
// by the meter label.
MultiSystemChain compile_scenario(const Scenario& scenario, std::size_t dimension_cap = kDefaultDimensionCap);

struct Sampling {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

struct RunOptions {
  std::optional<Sampling> sampling;  // exact when empty
  std::size_t dimension_cap = kDefaultDimensionCap;
};

// Throws ConditioningImpossible or DimensionCapExceeded.
OutcomeStats run_scenario(const Scenario& scenario, const RunOptions& options = {});

}  // namespace moments::scenario
