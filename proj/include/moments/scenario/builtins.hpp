#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moments/outcome_stats.hpp"
#include "moments/scenario/scenario.hpp"

namespace moments::scenario {

enum class Party { alice, bob };

Party parse_party(std::string_view name);

// Singlet on A, B prepared at @0, identity links up to @t2, except that A's
// link into @T+1 collapses onto the sigma_x eigenstate of `outcome`. A
// sigma_z difference meter "D" reads the chosen particle between @t1 and @t2.
// Requires t1 < T < t2.
Scenario epr_scenario(Party who, std::size_t t1 = 1, std::size_t collapse_at = 2, std::size_t t2 = 3, int outcome = +1);
OutcomeStats run_epr(Party who, std::size_t t1 = 1, std::size_t collapse_at = 2, std::size_t t2 = 3, int outcome = +1);

// One qubit P whose moments are linked with stride 2: even moments start in
// psi1 at @0, odd moments in psi2 at @1. Meter "D" reads
// observable(@second) - observable(@first). Requires n_moments >= 4 and
// first < second < n_moments.
Scenario double_life_scenario(const StateSpec& psi1, const StateSpec& psi2, std::size_t n_moments,
                              const ObservableSpec& observable, std::size_t first, std::size_t second);
OutcomeStats run_double_life(const StateSpec& psi1, const StateSpec& psi2, std::size_t n_moments,
                             const ObservableSpec& observable = PauliObservable{Axis::z}, std::size_t first = 0,
                             std::size_t second = 1);

// |up_z> with a partial sigma_x link (outcome +1, strengths alpha and
// sqrt(1 - alpha^2)) into @2, read by a sigma_z difference meter "D"
// between @1 and @3.
Scenario partial_link_scenario(double alpha);

struct SweepPoint {
  double alpha = 0;
  double beta = 0;
  double variance = 0;  // of the meter reading
  double success_probability = 0;
};

std::vector<SweepPoint> partial_sweep(std::span<const double> alphas);

// Named scenarios shipped with the library.
std::vector<std::string> builtin_names();
std::string builtin_text(std::string_view name);
Scenario builtin_scenario(std::string_view name);

}  // namespace moments::scenario
