#include "moments/scenario/runner.hpp"

#include "resolver.hpp"

namespace moments::scenario {

MultiSystemChain compile_scenario(const Scenario& scenario, std::size_t dimension_cap) {
  detail::Resolver resolver(dimension_cap);
  for (const auto& d : scenario.directives) resolver.add(d, detail::Columns::at(d.where.column));
  return std::move(resolver).finish();
}

OutcomeStats run_scenario(const Scenario& scenario, const RunOptions& options) {
  const MultiSystemChain chain = compile_scenario(scenario, options.dimension_cap);
  if (options.sampling) return sample_distribution(chain, options.sampling->samples, options.sampling->seed);
  return exact_distribution(chain);
}

}  // namespace moments::scenario
