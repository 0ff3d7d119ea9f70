#include "moments/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "moments/history.hpp"
#include "moments/meter.hpp"

namespace moments::protocol {

namespace {

constexpr double kImpossibleWeight = 1e-13;
constexpr double kNegligibleProbability = 1e-14;

std::string with_repeat_suffix(std::string label, std::map<std::string, int>& seen) {
  if (const int n = ++seen[label]; n > 1) label += "#" + std::to_string(n);
  return label;
}

std::string pointer_name(std::size_t i) { return "P" + std::to_string(i); }

PointerRegister pointer_for(const DifferencePair& pair, std::size_t i) {
  const int radius = integer_spectral_radius(pair.observable);
  return PointerRegister(pointer_name(i),
                         std::max(PointerRegister::kDefaultDimension, PointerRegister::minimal_dimension(2 * radius)));
}

// One operation on the single-time register, in execution order.
struct Action {
  std::optional<std::size_t> slot;  // set for projective measurements
  std::vector<SpectralComponent<double>> components;
  Op unitary;
};

std::vector<Action> schedule(const MeasurementPlan& plan, std::size_t n, const std::vector<PointerRegister>& pointers) {
  std::vector<Action> actions;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < plan.single_time.size(); ++i) {
      const auto& m = plan.single_time[i];
      if (m.spin != k) continue;
      actions.push_back({i, spectral_decomposition(m.observable.on(spin_name(k))), {}});
    }
    for (std::size_t i = 0; i < plan.difference_pairs.size(); ++i) {
      const auto& d = plan.difference_pairs[i];
      if (d.first != k && d.second != k) continue;
      const int sign = d.first == k ? -1 : +1;
      actions.push_back({std::nullopt, {}, coupling_unitary(d.observable.on(spin_name(k)), pointers[i], sign)});
    }
  }
  return actions;
}

struct Enumeration {
  const std::vector<Action>& actions;
  const ProtocolInstance& instance;
  std::vector<std::string> pointer_names;
  std::size_t recorded;
  std::map<OutcomeKey, double> weights;

  void descend(std::size_t step, const State& psi, OutcomeKey& key) {
    for (; step < actions.size(); ++step) {
      const Action& a = actions[step];
      if (!a.slot) {
        const State next = apply(a.unitary, psi);
        descend(step + 1, next, key);
        return;
      }
      for (const auto& c : a.components) {
        State branch = apply(c.projector, psi);
        if (branch.squared_norm() <= 1e-30) continue;
        key[*a.slot] = c.eigenvalue;
        descend(step + 1, branch, key);
      }
      return;
    }
    State rest = psi;
    for (std::size_t k = 1; k < instance.n_moments; ++k) {
      rest = contract_bra(bell_state<double>(Bell::phi_plus, spin_name(k - 1), ancilla_name(k)), rest);
    }
    std::vector<std::size_t> regs;
    for (const auto& p : pointer_names) regs.push_back(rest.layout().index_of(p));
    for (std::size_t f = 0; f < rest.dimension(); ++f) {
      const double w = std::norm(rest[f]);
      if (w == 0) continue;
      const auto digits = digits_of(rest.layout(), f);
      OutcomeKey full = key;
      for (std::size_t r : regs) {
        full.push_back(static_cast<double>(static_cast<int>(digits[r]) -
                                           static_cast<int>((rest.layout()[r].dimension - 1) / 2)));
      }
      weights[full] += w;
    }
  }
};

}  // namespace

void ProtocolInstance::validate() const {
  if (n_moments < 2) throw ValueError("protocol needs at least 2 moments");
  if (psi.layout().size() != 1 || psi.dimension() != 2) throw ValueError("protocol state must be a single qubit");
  if (!psi.is_normalized(1e-10)) throw ValueError("protocol state must be normalized");
}

std::string spin_name(std::size_t k) { return "S" + std::to_string(k); }
std::string ancilla_name(std::size_t k) { return "A" + std::to_string(k); }

void MeasurementPlan::validate(std::size_t n_moments) const {
  const auto check_observable = [](const Op& obs) {
    if (obs.layout().size() != 1 || obs.dimension() != 2) throw ValueError("plan observables must act on one qubit");
    if (!obs.is_hermitian()) throw ValueError("plan observables must be hermitian");
  };
  for (const auto& m : single_time) {
    if (m.spin >= n_moments) throw ValueError("plan refers to spin " + std::to_string(m.spin) + " of " +
                                              std::to_string(n_moments));
    check_observable(m.observable);
  }
  for (const auto& d : difference_pairs) {
    if (d.first >= n_moments || d.second >= n_moments) throw ValueError("difference pair refers to a missing spin");
    if (d.first == d.second) throw ValueError("difference pair needs two distinct spins");
    check_observable(d.observable);
    integer_spectral_radius(d.observable);
  }
}

std::vector<std::string> MeasurementPlan::labels() const {
  std::vector<std::string> out;
  std::map<std::string, int> seen;
  for (const auto& m : single_time) out.push_back(with_repeat_suffix(spin_name(m.spin), seen));
  for (const auto& d : difference_pairs) {
    out.push_back(with_repeat_suffix(spin_name(d.second) + "-" + spin_name(d.first), seen));
  }
  return out;
}

State build_initial_state(const ProtocolInstance& instance) {
  instance.validate();
  std::vector<std::size_t> dims(2 * instance.n_moments - 1, 2);
  checked_dimension(dims, instance.dimension_cap);
  State state = instance.psi.on(spin_name(0));
  for (std::size_t k = 1; k < instance.n_moments; ++k) {
    state = tensor(state, bell_state<double>(Bell::phi_plus, ancilla_name(k), spin_name(k)), instance.dimension_cap);
  }
  return state;
}

PostSelection post_select_bells(const State& state, const ProtocolInstance& instance) {
  State rest = state;
  for (std::size_t k = 1; k < instance.n_moments; ++k) {
    rest = contract_bra(bell_state<double>(Bell::phi_plus, spin_name(k - 1), ancilla_name(k)), rest);
  }
  const double p = rest.squared_norm() / state.squared_norm();
  if (!(p > kImpossibleWeight)) throw ConditioningImpossible("Bell post-selection has zero success probability");
  return {rest.normalized(), p};
}

OutcomeStats protocol_statistics(const ProtocolInstance& instance, const MeasurementPlan& plan) {
  instance.validate();
  plan.validate(instance.n_moments);

  std::vector<PointerRegister> pointers;
  for (std::size_t i = 0; i < plan.difference_pairs.size(); ++i) pointers.push_back(pointer_for(plan.difference_pairs[i], i));

  std::vector<std::size_t> dims(2 * instance.n_moments - 1, 2);
  for (const auto& p : pointers) dims.push_back(p.dimension());
  checked_dimension(dims, instance.dimension_cap);

  State joint = build_initial_state(instance);
  for (const auto& p : pointers) joint = tensor(joint, p.ready_state(), instance.dimension_cap);

  const std::vector<Action> actions = schedule(plan, instance.n_moments, pointers);
  Enumeration e{actions, instance, {}, plan.single_time.size(), {}};
  for (const auto& p : pointers) e.pointer_names.push_back(p.name());
  OutcomeKey key(plan.single_time.size(), 0.0);
  e.descend(0, joint, key);

  double total = 0;
  for (const auto& [k, w] : e.weights) total += w;
  if (!(total > kImpossibleWeight)) throw ConditioningImpossible("Bell post-selection has zero success probability");

  OutcomeStats stats;
  stats.labels = plan.labels();
  stats.success_probability = total;
  for (const auto& [k, w] : e.weights) {
    if (w / total > kNegligibleProbability) stats.outcomes.emplace(k, w / total);
  }
  return stats;
}

namespace {

// Adds the plan's events to a chain whose strand for moment/spin k is
// `strand(k)`, evaluated at moment `moment(k)`.
template <typename StrandOf, typename MomentOf>
void add_plan_events(MultiSystemChain& chain, const MeasurementPlan& plan, StrandOf strand, MomentOf moment) {
  const auto labels = plan.labels();
  for (std::size_t i = 0; i < plan.single_time.size(); ++i) {
    const auto& m = plan.single_time[i];
    chain.events.emplace_back(MeasureEvent{moment(m.spin), strand(m.spin), m.observable, labels[i]});
  }
  for (std::size_t i = 0; i < plan.difference_pairs.size(); ++i) {
    const auto& d = plan.difference_pairs[i];
    chain.pointers.push_back(pointer_for(d, i));
    // Pointer labels replace the engine's default pointer names below.
    chain.events.emplace_back(CouplingEvent{moment(d.first), d.observable.on(strand(d.first)), pointer_name(i), -1});
    chain.events.emplace_back(CouplingEvent{moment(d.second), d.observable.on(strand(d.second)), pointer_name(i), +1});
  }
}

OutcomeStats relabeled(OutcomeStats stats, const MeasurementPlan& plan) {
  stats.labels = plan.labels();
  return stats;
}

}  // namespace

OutcomeStats single_spin_oracle(const State& psi, std::size_t n_moments, const MeasurementPlan& plan) {
  plan.validate(n_moments);
  HistoryChain chain = identity_chain(psi.on("spin"), n_moments - 1);
  MultiSystemChain multi = as_multi_system(chain);
  add_plan_events(
      multi, plan, [](std::size_t) { return std::string("spin"); }, [](std::size_t k) { return TimeIndex{k}; });
  return relabeled(exact_distribution(multi), plan);
}

OutcomeStats product_state_baseline(const State& psi, std::size_t n_moments, const MeasurementPlan& plan) {
  plan.validate(n_moments);
  if (psi.layout().size() != 1 || psi.dimension() != 2) throw ValueError("baseline state must be a single qubit");
  MultiSystemChain multi;
  for (std::size_t k = 0; k < n_moments; ++k) {
    multi.strands.push_back(Strand{spin_name(k), 2, TimeIndex{0}, {}});
    multi.preparations.push_back(psi.on(spin_name(k)));
  }
  add_plan_events(
      multi, plan, [](std::size_t k) { return spin_name(k); }, [](std::size_t) { return TimeIndex{0}; });
  return relabeled(exact_distribution(multi), plan);
}

MeasurementPlan random_plan(std::size_t n_moments, std::mt19937_64& rng, std::size_t max_pairs) {
  std::uniform_int_distribution<std::size_t> coin(0, 1);
  std::uniform_int_distribution<std::size_t> pair_count(0, max_pairs);
  std::uniform_int_distribution<std::size_t> spin(0, n_moments - 1);
  const auto observable = [&] {
    const auto [theta, phi] = random_direction<double>(rng);
    return spin_observable<double>(theta, phi);
  };
  MeasurementPlan plan;
  for (std::size_t k = 0; k < n_moments; ++k) {
    if (coin(rng)) plan.single_time.push_back({k, observable()});
  }
  const std::size_t pairs = pair_count(rng);
  for (std::size_t i = 0; i < pairs; ++i) {
    const std::size_t a = spin(rng);
    std::size_t b = spin(rng);
    while (b == a) b = spin(rng);
    plan.difference_pairs.push_back({a, b, observable()});
  }
  if (plan.single_time.empty() && plan.difference_pairs.empty()) plan.single_time.push_back({spin(rng), observable()});
  return plan;
}

EquivalenceReport equivalence_report(const State& psi, std::size_t n_moments, std::size_t plans, std::uint64_t seed) {
  const ProtocolInstance instance{n_moments, psi};
  instance.validate();
  EquivalenceReport report;
  report.n_moments = n_moments;
  report.plans = plans;
  report.seed = seed;
  report.expected_success_probability = std::pow(0.25, static_cast<double>(n_moments - 1));
  report.success_probability = post_select_bells(build_initial_state(instance), instance).success_probability;

  std::mt19937_64 rng(seed);
  bool any_pair = false;
  report.min_baseline_total_variation = 1.0;
  for (std::size_t i = 0; i < plans; ++i) {
    const MeasurementPlan plan = random_plan(n_moments, rng);
    const OutcomeStats oracle = single_spin_oracle(psi, n_moments, plan);
    report.max_total_variation =
        std::max(report.max_total_variation, total_variation(protocol_statistics(instance, plan), oracle));
    const double baseline = total_variation(product_state_baseline(psi, n_moments, plan), oracle);
    report.max_baseline_total_variation = std::max(report.max_baseline_total_variation, baseline);
    if (!plan.difference_pairs.empty()) {
      any_pair = true;
      report.min_baseline_total_variation = std::min(report.min_baseline_total_variation, baseline);
    }
  }
  if (!any_pair) report.min_baseline_total_variation = 0;
  return report;
}

}  // namespace moments::protocol
