#pragma once

#include "moments/history/chain.hpp"
#include "moments/meter/pointer.hpp"

namespace moments {

// One pointer coupled with -A at t1 and +A at t2: the final reading is
// A(t2) - A(t1) and nothing about A(t1) or A(t2) separately.
MultiSystemChain difference_chain(const HistoryChain& chain, const Op& observable, TimeIndex t1, TimeIndex t2,
                                  std::size_t pointer_dimension = PointerRegister::kDefaultDimension);

OutcomeStats two_time_difference(const HistoryChain& chain, const Op& observable, TimeIndex t1, TimeIndex t2);

struct DifferenceRun {
  OutcomeStats stats;
  State final_state;  // system (x) pointer after the last moment, not renormalized
  std::string system;
  std::string pointer;
};

DifferenceRun run_two_time_difference(const HistoryChain& chain, const Op& observable, TimeIndex t1, TimeIndex t2);

// Normalized system state conditioned on a pointer reading.
State system_state_given_reading(const DifferenceRun& run, int reading);

}  // namespace moments
