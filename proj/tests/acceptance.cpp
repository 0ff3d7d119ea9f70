// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "moments/core/random.hpp"
#include "moments/history.hpp"
#include "moments/meter.hpp"
#include "moments/protocol.hpp"
#include "moments/scenario.hpp"
#include "support/oracles.hpp"

using namespace moments;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20261018;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

TimeIndex at(std::size_t k) { return TimeIndex{k}; }
State on_q(const oracle::Vec& v) { return State(RegisterLayout::single("q", v.size()), v); }
Op on_q(const oracle::Mat& m) { return Op(RegisterLayout::single("q", m.rows()), MatrixX<double>(m)); }

// 1. |contract|^2 against <phi| U_n ... U_1 |psi> from plain matrix products.
Verdict contraction() {
  std::mt19937_64 rng(kSeed + 1);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index d = 2 + trial % 2;
    const std::size_t links = 1 + trial % 6;
    const oracle::Vec psi = oracle::random_ket(d, rng), phi = oracle::random_ket(d, rng);
    HistoryChain chain{on_q(psi), {}, on_q(phi)};
    oracle::Mat u = oracle::eye(d);
    for (std::size_t k = 0; k < links; ++k) {
      const oracle::Mat step = oracle::random_unitary(d, rng);
      u = step * u;
      chain.links.push_back(Link::unitary(on_q(step), at(k), at(k + 1)));
    }
    const double want = std::norm(phi.dot(u * psi));
    worst = std::max({worst, std::abs(history_probability(chain) - want), std::abs(std::norm(contract(chain)) - want)});
  }
  return {worst <= 1e-10, "100 chains, max |error| " + fmt("%.2e", worst)};
}

// 2. H = 0: the difference pointer never moves and leaves psi untouched.
Verdict constancy() {
  std::mt19937_64 rng(kSeed + 2);
  double worst_p = 0, worst_f = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto [theta, phi] = random_direction<double>(rng);
    const State psi = random_state(RegisterLayout::single("q", 2), rng);
    const auto run = run_two_time_difference(identity_chain(psi, 2), spin_observable(theta, phi), at(0), at(2));
    worst_p = std::max(worst_p, std::abs(1 - run.stats.probability({0})));
    worst_f = std::max(worst_f, std::abs(1 - fidelity(system_state_given_reading(run, 0), psi)));
  }
  return {worst_p <= 1e-12 && worst_f <= 1e-12,
          "20 (psi, n): max |1 - P(0)| " + fmt("%.2e", worst_p) + ", max |1 - F| " + fmt("%.2e", worst_f)};
}

// 3. Single-time protocol against one spin at N moments.
Verdict protocol_equivalence() {
  std::mt19937_64 rng(kSeed + 3);
  double worst_tv = 0, worst_success = 0;
  std::size_t with_pairs = 0;
  for (std::size_t n : {2, 3, 4}) {
    for (int trial = 0; trial < 50; ++trial) {
      const State psi = random_state(RegisterLayout::single("psi", 2), rng);
      const auto plan = protocol::random_plan(n, rng);
      with_pairs += !plan.difference_pairs.empty();
      worst_tv = std::max(worst_tv, total_variation(protocol::protocol_statistics({n, psi}, plan),
                                                    protocol::single_spin_oracle(psi, n, plan)));
    }
    const State psi = random_state(RegisterLayout::single("psi", 2), rng);
    const protocol::ProtocolInstance inst{n, psi};
    const double p = protocol::post_select_bells(protocol::build_initial_state(inst), inst).success_probability;
    worst_success = std::max(worst_success, std::abs(p - std::pow(0.25, double(n - 1))));
  }
  return {worst_tv <= 1e-10 && worst_success <= 1e-12 && with_pairs > 0,
          "150 plans (" + std::to_string(with_pairs) + " with pairs), max TV " + fmt("%.2e", worst_tv) +
              ", max success error " + fmt("%.2e", worst_success)};
}

// 4. Independent copies disagree with the protocol.
Verdict negative_control() {
  const protocol::MeasurementPlan plan{{}, {{0, 1, pauli_x()}}};
  const State psi = axis_state(Axis::z, true);
  const auto base = protocol::product_state_baseline(psi, 2, plan);
  const auto proto = protocol::protocol_statistics({2, psi}, plan);
  const double err = std::max({std::abs(base.probability({-2}) - 0.25), std::abs(base.probability({0}) - 0.5),
                               std::abs(base.probability({2}) - 0.25)});
  const bool base_ok = base.outcomes.size() == 3 && err <= 1e-12;
  const bool proto_ok = proto.outcomes.size() == 1 && std::abs(proto.probability({0}) - 1) <= 1e-12;
  const double tv = total_variation(base, proto);
  return {base_ok && proto_ok && tv > 0.4,
          "baseline {-2: 1/4, 0: 1/2, 2: 1/4} (error " + fmt("%.1e", err) + "), protocol P(0) = " +
              fmt("%.12g", proto.probability({0})) + ", TV " + fmt("%.3g", tv)};
}

// 5. EPR: Bob undisturbed, Alice spread; Alice's single-time marginals
// against a sequential singlet simulation with explicit renormalization.
Verdict epr() {
  using scenario::Party;
  const auto bob = scenario::run_epr(Party::bob);
  const auto alice = scenario::run_epr(Party::alice);
  const bool bob_ok = bob.outcomes.size() == 1 && std::abs(bob.probability({0}) - 1) <= 1e-12;
  const double alice_err = std::max({std::abs(alice.probability({-2}) - 0.25), std::abs(alice.probability({0}) - 0.5),
                                     std::abs(alice.probability({2}) - 0.25)});
  const bool alice_ok = alice.outcomes.size() == 3 && alice_err <= 1e-12;

  const auto single = scenario::run_scenario(scenario::parse_scenario(
      "system A qubit\nsystem B qubit\nprepare A,B singlet\n"
      "link A @1 identity\nlink B @1 identity\nlink A @2 identity\nlink B @2 identity\n"
      "collapse A @3 up x\nlink B @3 identity\n"
      "measure A @1 pauli z\nmeasure A @3 pauli z\n"));
  // conventional: measure, collapse (renormalize), measure, on 4 amplitudes
  const oracle::Vec singlet = oracle::ket({0, oracle::kInvSqrt2, -oracle::kInvSqrt2, 0});
  const oracle::Mat collapse = oracle::kron(oracle::Mat(oracle::up_x() * oracle::up_x().adjoint()), oracle::eye(2));
  std::map<double, double> first, second;
  for (double a1 : {-1.0, 1.0}) {
    const oracle::Vec s1 = oracle::kron(oracle::eigenprojector(oracle::sz(), a1), oracle::eye(2)) * singlet;
    const double p1 = s1.squaredNorm();
    const oracle::Vec c = collapse * s1;
    const double pc = c.squaredNorm() / p1;
    for (double a2 : {-1.0, 1.0}) {
      const oracle::Vec s2 = oracle::kron(oracle::eigenprojector(oracle::sz(), a2), oracle::eye(2)) * (c / c.norm());
      const double w = p1 * pc * s2.squaredNorm();
      first[a1] += w;
      second[a2] += w;
    }
  }
  double total = 0;
  for (const auto& [k, w] : first) total += w;
  double marginal_err = 0;
  const auto m1 = single.marginal(0), m2 = single.marginal(1);
  for (double v : {-1.0, 1.0}) {
    marginal_err = std::max(marginal_err, std::abs((m1.count(v) ? m1.at(v) : 0) - first[v] / total));
    marginal_err = std::max(marginal_err, std::abs((m2.count(v) ? m2.at(v) : 0) - second[v] / total));
  }
  return {bob_ok && alice_ok && marginal_err <= 1e-12,
          std::string("Bob P(0) = ") + fmt("%.12g", bob.probability({0})) + ", Alice error " + fmt("%.1e", alice_err) +
              ", Alice marginals vs conventional " + fmt("%.1e", marginal_err)};
}

// 6. |phi><phi| = 1/2 I + 1/2 (2|phi><phi| - I).
Verdict collapse_decomposition() {
  std::mt19937_64 rng(kSeed + 6);
  std::vector<State> phis;
  for (Axis a : {Axis::x, Axis::y, Axis::z})
    for (bool up : {true, false}) phis.push_back(axis_state(a, up));
  for (int i = 0; i < 200; ++i) phis.push_back(random_state(RegisterLayout::single("q", 2), rng));
  double worst = 0;
  bool unitary = true;
  for (const auto& phi : phis) {
    const Link link = Link::collapse(phi, at(0), at(1));
    const auto dec = decompose_collapse(link);
    const Op sum = dec.weights[0] * dec.unitaries[0] + dec.weights[1] * dec.unitaries[1];
    worst = std::max(worst, max_abs_difference(sum, Op::outer(phi, phi)));
    unitary = unitary && dec.unitaries[0].is_unitary(1e-12) && dec.unitaries[1].is_unitary(1e-12);
  }
  return {worst <= 1e-12 && unitary, std::to_string(phis.size()) + " collapse links, max error " + fmt("%.2e", worst)};
}

// 7. Partial-link strength sweep and Kraus completeness.
Verdict partial_sweep() {
  std::vector<double> alphas{1 / std::sqrt(2.0)};
  for (int k = 71; k <= 99; k += 4) alphas.push_back(k / 100.0);
  alphas.push_back(1.0);
  const auto sweep = scenario::partial_sweep(alphas);
  bool monotone = true;
  double min_rest = 1e300;
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    if (sweep[i].variance < sweep[i - 1].variance) monotone = false;
    min_rest = std::min(min_rest, sweep[i].variance);
  }
  double completeness = 0;
  std::mt19937_64 rng(kSeed + 7);
  for (double a : alphas) {
    const auto [theta, phi] = random_direction<double>(rng);
    const auto k = partial_kraus({spin_up(theta, phi), spin_down(theta, phi)}, a, std::sqrt(1 - a * a));
    completeness = std::max(completeness, max_abs_difference(k[0].adjoint() * k[0] + k[1].adjoint() * k[1],
                                                             identity_operator()));
  }
  const double v0 = sweep[0].variance;
  return {std::abs(v0) <= 1e-12 && v0 <= min_rest && monotone && completeness <= 1e-12,
          "variance at 1/sqrt2 " + fmt("%.1e", v0) + ", grid 0.71..0.99,1.0 " +
              (monotone ? "nondecreasing" : "NOT monotone") + " (" + fmt("%.4g", sweep[1].variance) + " .. " +
              fmt("%.4g", sweep.back().variance) + "), Kraus completeness " + fmt("%.1e", completeness)};
}

// 8. 10^5 samples of every built-in within 3 sigma, and bit-identical reruns.
Verdict sampling() {
  const std::size_t n = 100000;
  std::size_t checks = 0, misses = 0;
  bool identical = true;
  std::string worst_name;
  double worst_z = 0;
  for (const auto& name : scenario::builtin_names()) {
    const auto s = scenario::builtin_scenario(name);
    const auto exact = scenario::run_scenario(s);
    scenario::RunOptions opts;
    opts.sampling = scenario::Sampling{n, kSeed};
    const auto sampled = scenario::run_scenario(s, opts);
    identical = identical && scenario::report_json(sampled) == scenario::report_json(scenario::run_scenario(s, opts));
    for (const auto& [key, p] : sampled.outcomes)
      if (exact.probability(key) <= 0) ++misses;
    for (const auto& [key, p] : exact.outcomes) {
      ++checks;
      const double sigma = std::sqrt(p * (1 - p) / double(n));
      const double z = sigma > 0 ? std::abs(sampled.probability(key) - p) / sigma : 0;
      if (z > worst_z) worst_z = z, worst_name = name;
      if (std::abs(sampled.probability(key) - p) > 3 * sigma + 1e-12) ++misses;
    }
  }
  return {misses == 0 && identical,
          std::to_string(checks) + " outcome checks, " + std::to_string(misses) + " outside 3 sigma (largest " +
              fmt("%.2f", worst_z) + " sigma in " + worst_name + "), reruns " + (identical ? "identical" : "DIFFER")};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 9. Fixture corpus: coverage, round trip, pinned JSON and pinned errors.
Verdict fixtures() {
  std::size_t runnable = 0, failures = 0;
  std::set<std::string> directives, error_classes;
  for (const auto& e : fs::directory_iterator(MOMENTS_FIXTURE_DIR)) {
    if (e.path().extension() != ".scn") continue;
    const std::string text = slurp(e.path());
    const fs::path json = fs::path(e.path()).replace_extension(".json");
    const fs::path err = fs::path(e.path()).replace_extension(".err");
    if (fs::exists(json)) {
      ++runnable;
      try {
        const auto s = scenario::parse_scenario(text);
        const std::string rendered = scenario::render_scenario(s);
        if (!(scenario::parse_scenario(rendered) == s)) ++failures;
        if (scenario::report_json(scenario::run_scenario(s)) != slurp(json)) ++failures;
        std::istringstream lines(rendered);
        for (std::string line; std::getline(lines, line);) directives.insert(line.substr(0, line.find(' ')));
      } catch (const std::exception&) {
        ++failures;
      }
    } else if (fs::exists(err)) {
      std::string want = slurp(err);
      while (!want.empty() && want.back() == '\n') want.pop_back();
      try {
        scenario::parse_scenario(text);
        ++failures;
      } catch (const scenario::ParseError& pe) {
        if (std::to_string(pe.line()) + ":" + std::to_string(pe.column()) + ": " + pe.reason() != want) ++failures;
        const std::string& r = pe.reason();
        for (const char* cls : {"unknown directive", "undeclared system", "non-unitary", "unnormalized", "time-ordering"})
          if (r.find(cls) != std::string::npos) error_classes.insert(cls);
      }
    } else {
      ++failures;
    }
  }
  const std::set<std::string> all{"system", "prepare", "link", "collapse", "measure",
                                  "partial", "meter-diff", "postselect", "bellpost"};
  const bool covered = std::includes(directives.begin(), directives.end(), all.begin(), all.end());
  return {runnable >= 12 && failures == 0 && covered && error_classes.size() == 5,
          std::to_string(runnable) + " pinned reports, " + std::to_string(failures) + " mismatches, " +
              std::to_string(directives.size()) + "/9 directives, " + std::to_string(error_classes.size()) +
              "/5 error classes"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"contraction correctness", contraction},
      {"multi-time constancy", constancy},
      {"protocol equivalence", protocol_equivalence},
      {"negative control", negative_control},
      {"EPR asymmetry", epr},
      {"collapse decomposition", collapse_decomposition},
      {"partial-measurement sweep", partial_sweep},
      {"sampling consistency", sampling},
      {"parser fixtures", fixtures},
  };
  int failed = 0, index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s %d %s: %s\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.c_str());
  }
  return failed ? 1 : 0;
}
