#pragma once

// N moments of one spin laid out as N spins at one time: spins S0..S{N-1} and
// ancillas A1..A{N-1}, prepared as |psi>_S0 (x) Phi+_{A1 S1} (x) ... and
// post-selected on Phi+ for every pair (S{k-1}, A{k}).

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "moments/outcome_stats.hpp"
#include "moments/qcore.hpp"

namespace moments::protocol {

struct ProtocolInstance {
  std::size_t n_moments = 2;
  State psi;  // single qubit
  std::size_t dimension_cap = kDefaultDimensionCap;

  void validate() const;
};

std::string spin_name(std::size_t k);
std::string ancilla_name(std::size_t k);

struct SingleTimeMeasurement {
  std::size_t spin;
  Op observable;
};

// Pointer coupled with -A on `first` and +A on `second`; the reading is
// A(t_second) - A(t_first).
struct DifferencePair {
  std::size_t first;
  std::size_t second;
  Op observable;
};

// On each spin the single-time measurements act first (in list order), then
// the difference couplings (in list order).
struct MeasurementPlan {
  std::vector<SingleTimeMeasurement> single_time;
  std::vector<DifferencePair> difference_pairs;

  void validate(std::size_t n_moments) const;
  // "S<k>" per single-time entry, then "S<second>-S<first>" per pair; repeats get "#2", "#3", ...
  std::vector<std::string> labels() const;
};

// Register order: S0, A1, S1, A2, S2, ...
State build_initial_state(const ProtocolInstance& instance);

struct PostSelection {
  State state;  // remaining registers (S{N-1} plus anything not in a Bell pair), renormalized
  double success_probability;
};

// Contracts <Phi+| onto every (S{k-1}, A{k}); throws ConditioningImpossible
// when the joint success probability is zero.
PostSelection post_select_bells(const State& state, const ProtocolInstance& instance);

// Exact plan statistics at the single time, conditioned on every Bell
// post-selection succeeding.
OutcomeStats protocol_statistics(const ProtocolInstance& instance, const MeasurementPlan& plan);

// The same plan on one spin at moments 0..N-1 with zero Hamiltonian.
OutcomeStats single_spin_oracle(const State& psi, std::size_t n_moments, const MeasurementPlan& plan);

// The same plan on N independent copies of psi (no post-selection).
OutcomeStats product_state_baseline(const State& psi, std::size_t n_moments, const MeasurementPlan& plan);

// Random spin-direction plan: each spin measured with probability 1/2, plus
// up to `max_pairs` difference pairs; never empty.
MeasurementPlan random_plan(std::size_t n_moments, std::mt19937_64& rng, std::size_t max_pairs = 2);

struct EquivalenceReport {
  std::size_t n_moments = 0;
  std::size_t plans = 0;
  std::uint64_t seed = 0;
  double max_total_variation = 0;           // protocol vs single-spin oracle
  double min_baseline_total_variation = 0;  // product baseline vs oracle, over plans with a pair
  double max_baseline_total_variation = 0;
  double success_probability = 0;           // no measurements at the single time
  double expected_success_probability = 0;  // (1/4)^(N-1)
};

EquivalenceReport equivalence_report(const State& psi, std::size_t n_moments, std::size_t plans, std::uint64_t seed);

}  // namespace moments::protocol
