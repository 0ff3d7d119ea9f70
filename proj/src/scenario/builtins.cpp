#include "moments/scenario/builtins.hpp"

#include <cmath>
#include <map>

#include "moments/scenario/runner.hpp"

namespace moments::scenario {

namespace {

Directive directive(DirectiveBody body) { return {std::move(body), {}}; }

// Through the text form, so errors carry line numbers.
OutcomeStats run_text(const Scenario& s) { return run_scenario(parse_scenario(render_scenario(s))); }

const std::map<std::string, std::string, std::less<>>& library() {
  static const std::map<std::string, std::string, std::less<>> texts = [] {
    std::map<std::string, std::string, std::less<>> m;
    m["epr-alice"] = render_scenario(epr_scenario(Party::alice));
    m["epr-bob"] = render_scenario(epr_scenario(Party::bob));
    m["double-life"] = render_scenario(
        double_life_scenario(AxisState{Axis::z, true}, AxisState{Axis::x, true}, 4, PauliObservable{Axis::z}, 0, 1));
    m["partial-link"] = render_scenario(partial_link_scenario(0.9));
    m["partial-event"] =
        "# weak sigma_x reading followed by a sharp sigma_z reading\n"
        "system A qubit\n"
        "prepare A spin pi/3 pi/5\n"
        "link A @1 identity\n"
        "partial A @1 pauli x 0.9 sqrt(0.19)\n"
        "measure A @1 pauli z\n";
    m["bell-protocol"] =
        "# three moments of one spin held by S0, S1, S2 at a single time\n"
        "system S0 qubit\n"
        "system A1 qubit\n"
        "system S1 qubit\n"
        "system A2 qubit\n"
        "system S2 qubit\n"
        "prepare S0 spin 1 0.5\n"
        "prepare A1,S1 bell phi+\n"
        "prepare A2,S2 bell phi+\n"
        "measure S1 @0 pauli x\n"
        "meter-diff D S0 @0 S2 @0 pauli z\n"
        "bellpost S0,A1\n"
        "bellpost S1,A2\n";
    return m;
  }();
  return texts;
}

}  // namespace

Party parse_party(std::string_view name) {
  if (name == "alice") return Party::alice;
  if (name == "bob") return Party::bob;
  throw ValueError("expected alice or bob, got '" + std::string(name) + "'");
}

Scenario epr_scenario(Party who, std::size_t t1, std::size_t collapse_at, std::size_t t2, int outcome) {
  if (!(t1 < collapse_at && collapse_at < t2)) throw ValueError("EPR setup needs t1 < T < t2");
  if (outcome != 1 && outcome != -1) throw ValueError("EPR outcome must be +1 or -1");
  Scenario s;
  s.directives.push_back(directive(SystemDecl{"A", 2}));
  s.directives.push_back(directive(SystemDecl{"B", 2}));
  s.directives.push_back(directive(PrepareDecl{{"A", "B"}, std::nullopt, SingletState{}}));
  for (std::size_t k = 1; k <= t2; ++k) {
    if (k == collapse_at + 1) {
      s.directives.push_back(directive(CollapseDecl{"A", k, AxisState{Axis::x, outcome == 1}}));
    } else {
      s.directives.push_back(directive(LinkDecl{"A", k, 1, IdentityKind{}}));
    }
    s.directives.push_back(directive(LinkDecl{"B", k, 1, IdentityKind{}}));
  }
  const std::string particle = who == Party::alice ? "A" : "B";
  s.directives.push_back(
      directive(MeterDiffDecl{"D", particle, t1, particle, t2, PauliObservable{Axis::z}, std::nullopt}));
  return s;
}

OutcomeStats run_epr(Party who, std::size_t t1, std::size_t collapse_at, std::size_t t2, int outcome) {
  return run_text(epr_scenario(who, t1, collapse_at, t2, outcome));
}

Scenario double_life_scenario(const StateSpec& psi1, const StateSpec& psi2, std::size_t n_moments,
                              const ObservableSpec& observable, std::size_t first, std::size_t second) {
  if (n_moments < 4) throw ValueError("double life needs at least 4 moments");
  if (!(first < second && second < n_moments)) throw ValueError("double life meter needs first < second < n_moments");
  Scenario s;
  s.directives.push_back(directive(SystemDecl{"P", 2}));
  s.directives.push_back(directive(PrepareDecl{{"P"}, 0, psi1}));
  s.directives.push_back(directive(PrepareDecl{{"P"}, 1, psi2}));
  for (std::size_t k = 2; k < n_moments; ++k) s.directives.push_back(directive(LinkDecl{"P", k, 2, IdentityKind{}}));
  s.directives.push_back(directive(MeterDiffDecl{"D", "P", first, "P", second, observable, std::nullopt}));
  return s;
}

OutcomeStats run_double_life(const StateSpec& psi1, const StateSpec& psi2, std::size_t n_moments,
                             const ObservableSpec& observable, std::size_t first, std::size_t second) {
  return run_text(double_life_scenario(psi1, psi2, n_moments, observable, first, second));
}

Scenario partial_link_scenario(double alpha) {
  if (!(alpha >= 0 && alpha <= 1)) throw ValueError("partial strength alpha must lie in [0, 1]");
  const double beta = std::sqrt(1 - alpha * alpha);
  Scenario s;
  s.directives.push_back(directive(SystemDecl{"A", 2}));
  s.directives.push_back(directive(PrepareDecl{{"A"}, std::nullopt, AxisState{Axis::z, true}}));
  s.directives.push_back(directive(LinkDecl{"A", 1, 1, IdentityKind{}}));
  s.directives.push_back(directive(LinkDecl{"A", 2, 1, PartialKind{PauliObservable{Axis::x}, alpha, beta}}));
  s.directives.push_back(directive(LinkDecl{"A", 3, 1, IdentityKind{}}));
  s.directives.push_back(directive(MeterDiffDecl{"D", "A", 1, "A", 3, PauliObservable{Axis::z}, std::nullopt}));
  return s;
}

std::vector<SweepPoint> partial_sweep(std::span<const double> alphas) {
  std::vector<SweepPoint> out;
  for (double alpha : alphas) {
    const Scenario s = partial_link_scenario(alpha);
    const OutcomeStats stats = run_scenario(s);
    const auto& link = std::get<LinkDecl>(s.directives[3].body);
    out.push_back({alpha, std::get<PartialKind>(link.kind).beta, stats.variance(0), stats.success_probability});
  }
  return out;
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : library()) names.push_back(name);
  return names;
}

std::string builtin_text(std::string_view name) {
  const auto it = library().find(name);
  if (it == library().end()) throw ValueError("unknown built-in scenario '" + std::string(name) + "'");
  return it->second;
}

Scenario builtin_scenario(std::string_view name) { return parse_scenario(builtin_text(name)); }

}  // namespace moments::scenario
