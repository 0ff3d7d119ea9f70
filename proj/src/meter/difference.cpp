#include "moments/meter/difference.hpp"

#include <algorithm>

namespace moments {

MultiSystemChain difference_chain(const HistoryChain& chain, const Op& observable, TimeIndex t1, TimeIndex t2,
                                  std::size_t pointer_dimension) {
  if (!(t1 < t2)) throw ValueError("two-time difference needs t1 < t2");
  if (!chain.covers(t1) || !chain.covers(t2)) throw ValueError("two-time difference moments must lie on the chain");
  MultiSystemChain multi = as_multi_system(chain);
  const std::string& system = multi.strands.front().name;
  if (observable.layout().size() != 1) throw LayoutError("difference observable must act on one register");
  const Op obs = observable.on(system);

  const int radius = integer_spectral_radius(obs);
  const std::size_t dim = std::max(pointer_dimension, PointerRegister::minimal_dimension(2 * radius));
  std::string pointer = "pointer";
  while (pointer == system) pointer += "_";
  multi.pointers.emplace_back(pointer, dim);
  multi.events.emplace_back(CouplingEvent{t1, obs, pointer, -1});
  multi.events.emplace_back(CouplingEvent{t2, obs, pointer, +1});
  return multi;
}

OutcomeStats two_time_difference(const HistoryChain& chain, const Op& observable, TimeIndex t1, TimeIndex t2) {
  return exact_distribution(difference_chain(chain, observable, t1, t2));
}

DifferenceRun run_two_time_difference(const HistoryChain& chain, const Op& observable, TimeIndex t1, TimeIndex t2) {
  const MultiSystemChain multi = difference_chain(chain, observable, t1, t2);
  return {exact_distribution(multi), evolve(multi), multi.strands.front().name, multi.pointers.front().name()};
}

State system_state_given_reading(const DifferenceRun& run, int reading) {
  const std::size_t p = run.final_state.layout().index_of(run.pointer);
  const PointerRegister pointer(run.pointer, run.final_state.layout()[p].dimension);
  const State conditioned = contract_bra(pointer.position_state(reading), run.final_state);
  if (!(conditioned.squared_norm() > 1e-24 * run.final_state.squared_norm())) {
    throw ValueError("pointer reading has zero probability");
  }
  return conditioned.normalized();
}

}  // namespace moments
