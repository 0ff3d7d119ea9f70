#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "moments/scenario.hpp"
#include "support/oracles.hpp"

using namespace moments;
using namespace moments::scenario;
using std::numbers::pi;

namespace {

Directive body(DirectiveBody b) { return Directive{std::move(b), {}}; }

struct Rejection {
  const char* text;
  std::size_t line;
  std::size_t column;
  const char* reason;
};

void expect_rejects(const Rejection& r) {
  try {
    parse_scenario(r.text);
    ADD_FAILURE() << "accepted: " << r.text;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.reason(), r.reason) << r.text;
    EXPECT_EQ(e.line(), r.line) << r.text;
    EXPECT_EQ(e.column(), r.column) << r.text;
  }
}

}  // namespace

// --- parsing -----------------------------------------------------------------------

TEST(Parse, DirectiveExample) {
  const Scenario s = parse_scenario(
      "# header comment\n"
      "system A qubit\n"
      "system Q qudit 3   # trailing comment\n"
      "system P qubit\n"
      "\n"
      "prepare A up x\n"
      "prepare Q basis 2\n"
      "prepare P @0 up z\n"
      "prepare P @1 ket 0.6 0.8i\n"
      "link A @1 unitary ry(pi/2)\n"
      "link A @2 partial pauli x 0.8 0.6\n"
      "collapse A @3 down z\n"
      "link Q @1 unitary [[0, 1, 0], [1, 0, 0], [0, 0, 1]]\n"
      "link P @3 identity stride 2\n"
      "measure A @1 pauli y\n"
      "partial A @2 spin pi/2 0 0.6 0.8\n"
      "meter-diff D A @1 A @3 pauli z dim 9\n"
      "postselect Q basis 2\n"
      "bellpost A,P @3\n");
  ASSERT_EQ(s.directives.size(), 17u);
  // positions name the directive keyword
  EXPECT_EQ(s.directives[0].where.line, 2u);
  EXPECT_EQ(s.directives[3].where.line, 6u);
  EXPECT_EQ(s.directives[0].where.column, 1u);

  const std::vector<Directive> want{
      body(SystemDecl{"A", 2}),
      body(SystemDecl{"Q", 3}),
      body(SystemDecl{"P", 2}),
      body(PrepareDecl{{"A"}, std::nullopt, AxisState{Axis::x, true}}),
      body(PrepareDecl{{"Q"}, std::nullopt, BasisState{2}}),
      body(PrepareDecl{{"P"}, 0, AxisState{Axis::z, true}}),
      body(PrepareDecl{{"P"}, 1, KetState{{0.6, Complex(0, 0.8)}}}),
      body(LinkDecl{"A", 1, 1, UnitaryKind{NamedUnitary{"ry", pi / 2}}}),
      body(LinkDecl{"A", 2, 1, PartialKind{PauliObservable{Axis::x}, 0.8, 0.6}}),
      body(CollapseDecl{"A", 3, AxisState{Axis::z, false}}),
      body(LinkDecl{"Q", 1, 1, UnitaryKind{MatrixUnitary{{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}}}}),
      body(LinkDecl{"P", 3, 2, IdentityKind{}}),
      body(MeasureDecl{"A", 1, PauliObservable{Axis::y}}),
      body(PartialDecl{"A", 2, SpinObservable{pi / 2, 0}, 0.6, 0.8}),
      body(MeterDiffDecl{"D", "A", 1, "A", 3, PauliObservable{Axis::z}, 9}),
      body(PostselectDecl{{"Q"}, std::nullopt, BasisState{2}}),
      body(BellpostDecl{"A", "P", 3}),
  };
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(s.directives[i], want[i]) << i;
  EXPECT_NO_THROW(run_scenario(s));
}

TEST(Parse, WindowsLineEndingsAndBlankLines) {
  const Scenario a = parse_scenario("system A qubit\r\n\r\nprepare A up z\r\n");
  const Scenario b = parse_scenario("system A qubit\nprepare A up z");
  EXPECT_EQ(a, b);
  EXPECT_EQ(parse_scenario("").directives.size(), 0u);
  EXPECT_EQ(parse_scenario("   # only a comment\n").directives.size(), 0u);
}

TEST(Parse, Rejections) {
  const Rejection cases[] = {
      {"sistem A qubit", 1, 1, "unknown directive 'sistem'"},
      {"system A qubit\nsystem A qubit", 2, 8, "system 'A' is already declared"},
      {"system A qutrit", 1, 10, "expected 'qubit' or 'qudit <d>', got 'qutrit'"},
      {"system A qudit 1", 1, 16, "system dimension must be at least 2"},
      {"system 9A qubit", 1, 8, "system name '9A' is not an identifier"},
      {"system A qubit\nprepare B up z", 2, 9, "undeclared system 'B'"},
      {"system A qubit\nprepare A up w", 2, 14, "malformed axis: expected axis x, y or z, got 'w'"},
      {"system A qubit\nprepare A ket 1 1", 2, 11, "unnormalized state (squared norm 2)"},
      {"system A qubit\nprepare A ket 1 0 0", 2, 11, "ket has 3 amplitudes; expected 2"},
      {"system A qubit\nprepare A up z\nlink A @1 unitary [[1,1],[0,1]]", 3, 19, "non-unitary matrix"},
      {"system A qubit\nprepare A up z\nlink A @1 unitary [[1,0],[0,1]", 3, 19, "unterminated bracket"},
      {"system A qubit\nprepare A up z\nlink A @1 unitary rx(pi/2", 3, 19, "unterminated bracket"},
      {"system A qubit\nprepare A up z\nmeasure A @0 pauli z)", 3, 21, "unbalanced ')'"},
      {"system A qubit\nprepare A up z\nmeasure A @1 pauli z", 3, 11, "time-ordering violation: 'A' has no moment @1"},
      {"system A qubit\nprepare A up z\nlink A @1 identity\nlink A @1 identity", 4, 8,
       "time-ordering violation: moment @1 of 'A' is already defined"},
      {"system A qubit\nprepare A up z\nlink A @2 identity", 3, 8,
       "time-ordering violation: 'A' has no chain ending at @1 to link from"},
      {"system A qubit\nprepare A up z\nlink A @1 identity\nmeter-diff D A @1 A @0 pauli z", 4, 21,
       "time-ordering violation: difference meter needs its first moment before the second"},
      {"system A qubit\nprepare A up z\nlink A @1 identity\nmeter-diff D A @0 A @1 pauli z dim 6", 4, 36,
       "pointer dimension must be odd and at least 5"},
      {"system A qubit\nprepare A up z\nlink A @1 identity\nmeter-diff 1D A @0 A @1 pauli z", 4, 12,
       "meter label '1D' is not an identifier"},
      {"system A qubit\nprepare A up z\nlink A @1 identity\nmeter-diff D A @0 A @1 pauli z\n"
       "meter-diff D A @0 A @1 pauli x",
       5, 12, "meter 'D' is already declared"},
      {"system A qubit\nprepare A up z\npostselect A up x\nlink A @1 identity", 4, 8,
       "time-ordering violation: 'A' is post-selected at @0"},
      {"system A qubit\nprepare A up z\nmeasure A @0 pauli z extra", 3, 22, "unexpected token 'extra'"},
      {"system A qubit\nprepare A up z\nmeasure A 0 pauli z", 3, 11, "malformed moment: expected a moment '@k', got '0'"},
      {"system A qubit\nprepare A up z\npartial A @0 pauli x 0.9 0.9", 3, 14,
       "partial measurement needs alpha^2 + beta^2 = 1"},
      {"system A qubit\nsystem B qubit\nprepare A,B singlet\nbellpost A,A", 4, 10,
       "bell post-selection needs two different systems"},
      {"system A qudit 3\nprepare A up z", 2, 11, "axis state needs one qubit"},
      {"system A qubit\nprepare A up z\nmeasure A @0 matrix [[1,i],[1,0]]", 3, 14, "observable matrix is not hermitian"},
      {"system A qubit\nprepare A up z\nlink A @1 identity stride 0", 3, 27, "stride must be at least 1"},
      {"system A qubit\nprepare A spin pi/x 0", 2, 16, "malformed polar angle: unexpected 'x'"},
      {"system A qubit\nprepare A up z\nprepare A up x", 3, 11, "moment @0 of 'A' is already defined"},
  };
  for (const auto& c : cases) expect_rejects(c);
}

TEST(Parse, MeterNeedsIntegerSpectrum) {
  EXPECT_THROW(parse_scenario("system A qubit\nprepare A up z\nlink A @1 identity\n"
                              "meter-diff D A @0 A @1 matrix [[0.5,0],[0,-0.5]]"),
               ParseError);
  // a pointer too small for a wide spectrum
  EXPECT_THROW(parse_scenario("system A qudit 3\nprepare A basis 0\nlink A @1 identity\n"
                              "meter-diff D A @0 A @1 matrix [[3,0,0],[0,0,0],[0,0,-3]] dim 7"),
               ParseError);
}

TEST(Parse, ErrorMessageCarriesPosition) {
  try {
    parse_scenario("system A qubit\nsystem A qubit");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_STREQ(e.what(), "line 2, column 8: system 'A' is already declared");
  }
}

// --- literals --------------------------------------------------------------------------

TEST(Literal, RealsAndComplexNumbers) {
  const auto ket = std::get<KetState>(parse_state_spec("ket 1/sqrt(2) 0.5-0.5i"));
  ASSERT_EQ(ket.amplitudes.size(), 2u);
  EXPECT_NEAR(ket.amplitudes[0].real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(ket.amplitudes[1], Complex(0.5, -0.5));
  const auto imag = std::get<KetState>(parse_state_spec("ket i -i 1e-3 -2.5e-1i"));
  EXPECT_EQ(imag.amplitudes, (std::vector<Complex>{{0, 1}, {0, -1}, {1e-3, 0}, {0, -0.25}}));
  const auto spin = std::get<SpinState>(parse_state_spec("spin -3*pi/4 2*pi"));
  EXPECT_NEAR(spin.theta, -3 * pi / 4, 1e-15);
  EXPECT_NEAR(spin.phi, 2 * pi, 1e-15);
  EXPECT_EQ(std::get<BellState>(parse_state_spec("bell psi-")).which, Bell::psi_minus);
  EXPECT_THROW(parse_state_spec("bell omega"), ParseError);
  EXPECT_THROW(parse_state_spec("spin 1"), ParseError);
  EXPECT_THROW(parse_state_spec("ket"), ParseError);
  EXPECT_THROW(parse_state_spec("ket 1+"), ParseError);
  EXPECT_THROW(parse_state_spec("ket sqrt(-1)"), ParseError);
}

TEST(Literal, ObservablesAndMatrices) {
  const auto m = std::get<MatrixObservable>(parse_observable_spec("matrix [[0, -i], [i, 0]]"));
  EXPECT_EQ(m.rows, (MatrixLiteral{{0, Complex(0, -1)}, {Complex(0, 1), 0}}));
  EXPECT_EQ(std::get<PauliObservable>(parse_observable_spec("pauli x")).axis, Axis::x);
  EXPECT_THROW(parse_observable_spec("matrix [[1,0],[0]]"), ParseError);
  EXPECT_THROW(parse_observable_spec("pauli q"), ParseError);
  EXPECT_THROW(parse_observable_spec("hamiltonian"), ParseError);
}

TEST(Literal, RoundTrip) {
  for (const char* text : {"ket 1 0", "ket 0.6 0.8i", "basis 3", "up x", "down y", "spin 1.25 -0.5", "singlet",
                           "bell phi-", "ket 0.5-0.5i 0.5+0.5i"}) {
    const StateSpec spec = parse_state_spec(text);
    EXPECT_EQ(parse_state_spec(render_state_spec(spec)), spec) << text;
  }
  for (const char* text : {"pauli z", "spin pi/3 pi/5", "matrix [[1,2-i],[2+i,-1]]"}) {
    const ObservableSpec spec = parse_observable_spec(text);
    EXPECT_EQ(parse_observable_spec(render_observable_spec(spec)), spec) << text;
  }
}

TEST(Literal, ValuesMatchLibraryBuilders) {
  const auto two = RegisterLayout({{"a", 2}, {"b", 2}});
  EXPECT_TRUE(equal_up_to_phase(make_state(SingletState{}, two), singlet(), 1e-15));
  EXPECT_TRUE(equal_up_to_phase(make_state(BellState{Bell::phi_plus}, two), bell_state(Bell::phi_plus), 1e-15));
  const auto q = RegisterLayout::single("q", 2);
  EXPECT_TRUE(equal_up_to_phase(make_state(SpinState{0.7, 0.2}, q), spin_up(0.7, 0.2), 1e-15));
  EXPECT_TRUE(equal_up_to_phase(make_state(BasisState{1}, q), axis_state(Axis::z, false), 1e-15));
  EXPECT_THROW(make_state(BasisState{2}, q), ValueError);
  EXPECT_THROW(make_state(SingletState{}, q), ValueError);
  EXPECT_LT(max_abs_difference(make_observable(SpinObservable{0.7, 0.2}, "q", 2), spin_observable(0.7, 0.2)), 1e-15);
  EXPECT_THROW(make_observable(PauliObservable{Axis::x}, "q", 3), ValueError);
  EXPECT_LT(max_abs_difference(make_unitary(NamedUnitary{"rx", 0.3}, "q", 2), rotation_x(0.3)), 1e-15);
  EXPECT_LT(max_abs_difference(make_unitary(NamedUnitary{"h", 0}, "q", 2), hadamard()), 1e-15);
  EXPECT_THROW(make_unitary(MatrixUnitary{{{1, 1}, {0, 1}}}, "q", 2), ValueError);
}

TEST(Render, ScenarioRoundTrip) {
  for (const auto& name : builtin_names()) {
    const Scenario s = builtin_scenario(name);
    const std::string text = render_scenario(s);
    EXPECT_EQ(parse_scenario(text), s) << name;
    EXPECT_EQ(render_scenario(parse_scenario(text)), text) << name;
  }
  const std::string canonical = "system A qubit\nprepare A @0 up z\nlink A @2 identity stride 2\n";
  EXPECT_EQ(render_scenario(parse_scenario("system  A  qubit\nprepare A @0 up z # c\nlink A @2 identity stride 2\n")),
            canonical);
}

// --- running ---------------------------------------------------------------------------

TEST(Run, EprAsymmetry) {
  const auto alice = run_epr(Party::alice);
  EXPECT_EQ(alice.labels, std::vector<std::string>{"D"});
  EXPECT_NEAR(alice.probability({-2}), 0.25, 1e-14);
  EXPECT_NEAR(alice.probability({0}), 0.5, 1e-14);
  EXPECT_NEAR(alice.probability({2}), 0.25, 1e-14);
  EXPECT_EQ(alice.outcomes.size(), 3u);
  EXPECT_NEAR(alice.success_probability, 0.5, 1e-14);
  const auto bob = run_epr(Party::bob);
  EXPECT_EQ(bob.outcomes.size(), 1u);
  EXPECT_NEAR(bob.probability({0}), 1.0, 1e-14);
  // the collapse outcome does not change either marginal
  EXPECT_LT(total_variation(run_epr(Party::alice, 1, 2, 3, -1), alice), 1e-14);
  EXPECT_LT(total_variation(run_epr(Party::bob, 1, 2, 3, -1), bob), 1e-14);
  EXPECT_THROW(epr_scenario(Party::alice, 2, 2, 3), ValueError);
  EXPECT_THROW(parse_party("carol"), ValueError);
}

TEST(Run, DoubleLife) {
  // even moments hold |up z> (reading fixed at +1), odd moments |up x>
  const auto stats = run_double_life(AxisState{Axis::z, true}, AxisState{Axis::x, true}, 4);
  const std::map<double, double> frozen{{-2, 0.5}, {0, 0.5}};
  ASSERT_EQ(stats.outcomes.size(), 2u);
  for (const auto& [k, p] : frozen) EXPECT_NEAR(stats.probability({k}), p, 1e-14);
  // two moments of the same life, @0 and @2, do not disturb each other
  const auto same = run_double_life(AxisState{Axis::z, true}, AxisState{Axis::x, true}, 4, PauliObservable{Axis::x}, 0, 2);
  EXPECT_NEAR(same.probability({0}), 1.0, 1e-14);
  EXPECT_THROW(run_double_life(AxisState{}, AxisState{}, 3), ValueError);
}

TEST(Run, PartialEventMatchesOracle) {
  const auto stats = run_scenario(builtin_scenario("partial-event"));
  EXPECT_EQ(stats.labels, (std::vector<std::string>{"A@1", "A@1#2"}));
  const oracle::Mat sx = oracle::sx();
  const oracle::Mat px = oracle::eigenprojector(sx, 1), mx = oracle::eigenprojector(sx, -1);
  const double a = 0.9, b = std::sqrt(0.19);
  const oracle::Mat kp = a * px + b * mx, km = b * px + a * mx;
  const oracle::Vec psi = oracle::ket({std::cos(pi / 6), std::polar(std::sin(pi / 6), pi / 5)});
  for (int x : {-1, 1}) {
    for (int z : {-1, 1}) {
      const oracle::Vec v = oracle::eigenprojector(oracle::sz(), z) * (x > 0 ? kp : km) * psi;
      EXPECT_NEAR(stats.probability({double(x), double(z)}), v.squaredNorm(), 1e-12) << x << z;
    }
  }
}

TEST(Run, BellProtocolMatchesOneSpinOracle) {
  // S0, S1, S2 are moments 0, 1, 2 of one spin prepared in spin(1, 0.5)
  const auto stats = run_scenario(builtin_scenario("bell-protocol"));
  EXPECT_EQ(stats.labels, (std::vector<std::string>{"S1@0", "D"}));
  EXPECT_NEAR(stats.success_probability, 0.0625, 1e-12);
  const oracle::Vec psi = oracle::ket({std::cos(0.5), std::polar(std::sin(0.5), 0.5)});
  for (int x : {-1, 1}) {
    const auto r = oracle::spin_pointer(psi, {oracle::eigenprojector(oracle::sx(), x), oracle::eye(2)}, oracle::sz(), 0, 2);
    for (const auto& [d, p] : r.distribution) EXPECT_NEAR(stats.probability({double(x), double(d)}), p * r.weight, 1e-12);
  }
}

TEST(Run, SingletBaselineAtOneTime) {
  // two different particles at the same moment: B - A is always +-2
  const auto stats = run_scenario(parse_scenario("system A qubit\nsystem B qubit\nprepare A,B singlet\n"
                                                 "meter-diff D A @0 B @0 pauli z\n"));
  EXPECT_EQ(stats.outcomes.size(), 2u);
  EXPECT_NEAR(stats.probability({-2}), 0.5, 1e-14);
  EXPECT_NEAR(stats.probability({2}), 0.5, 1e-14);
}

TEST(Run, PartialLinkSweep) {
  const std::vector<double> alphas{1 / std::sqrt(2.0), 0.8, 0.9, 1.0};
  const auto sweep = partial_sweep(alphas);
  ASSERT_EQ(sweep.size(), 4u);
  EXPECT_NEAR(sweep[0].variance, 0.0, 1e-12);
  for (const auto& pt : sweep) {
    const double p = (1 - 2 * pt.alpha * pt.beta) / 2;
    EXPECT_NEAR(pt.variance, 4 * p * (1 - p), 1e-12);
    EXPECT_NEAR(pt.success_probability, 0.5, 1e-12);
    EXPECT_NEAR(pt.alpha * pt.alpha + pt.beta * pt.beta, 1.0, 1e-15);
  }
  EXPECT_NEAR(sweep[3].variance, 1.0, 1e-12);
  const std::vector<double> bad{1.5};
  EXPECT_THROW(partial_sweep(bad), ValueError);
}

TEST(Run, ConditioningAndCapErrors) {
  EXPECT_THROW(run_scenario(parse_scenario("system A qubit\nprepare A up z\npostselect A down z")),
               ConditioningImpossible);
  const Scenario wide = parse_scenario("system A qudit 16\nsystem B qudit 16\nprepare A basis 0\nprepare B basis 0\n");
  RunOptions tight;
  tight.dimension_cap = 128;
  EXPECT_THROW(run_scenario(wide, tight), DimensionCapExceeded);
  EXPECT_NO_THROW(run_scenario(wide));
}

TEST(Run, SamplingIsSeededAndBounded) {
  const Scenario s = builtin_scenario("epr-alice");
  RunOptions opts;
  opts.sampling = Sampling{5000, 77};
  const auto a = run_scenario(s, opts);
  const auto b = run_scenario(s, opts);
  EXPECT_EQ(a.outcomes, b.outcomes);
  EXPECT_EQ(a.success_probability, b.success_probability);
  EXPECT_FALSE(a.is_exact());
  EXPECT_LT(total_variation(a, run_scenario(s)), 0.05);
}

// --- reports -------------------------------------------------------------------------------

TEST(Report, JsonExample) {
  EXPECT_EQ(report_json(run_epr(Party::alice)),
            "{\n"
            "  \"labels\": [\"D\"],\n"
            "  \"mode\": \"exact\",\n"
            "  \"outcomes\": [\n"
            "    {\"probability\": 0.25, \"values\": [-2]},\n"
            "    {\"probability\": 0.5, \"values\": [0]},\n"
            "    {\"probability\": 0.25, \"values\": [2]}\n"
            "  ],\n"
            "  \"samples\": null,\n"
            "  \"seed\": null,\n"
            "  \"success_probability\": 0.5\n"
            "}\n");
}

TEST(Report, CsvExample) {
  const std::string csv = report_csv(run_epr(Party::alice));
  EXPECT_EQ(csv,
            "D,probability,mode,samples,seed,success_probability\n"
            "-2,0.25,exact,,,0.5\n"
            "0,0.5,exact,,,0.5\n"
            "2,0.25,exact,,,0.5\n");
  const auto stats = run_scenario(builtin_scenario("bell-protocol"));
  const std::string big = report_csv(stats);
  EXPECT_EQ(static_cast<std::size_t>(std::count(big.begin(), big.end(), '\n')), stats.outcomes.size() + 1);
}

TEST(Report, SampledFields) {
  RunOptions opts;
  opts.sampling = Sampling{100, 3};
  const std::string json = report_json(run_scenario(builtin_scenario("epr-bob"), opts));
  EXPECT_NE(json.find("\"mode\": \"sampled\""), std::string::npos);
  EXPECT_NE(json.find("\"samples\": 100,"), std::string::npos);
  EXPECT_NE(json.find("\"seed\": 3,"), std::string::npos);
  EXPECT_NE(json.find("{\"probability\": 1, \"values\": [0]}"), std::string::npos);
  EXPECT_EQ(parse_report_format("csv"), ReportFormat::csv);
  EXPECT_THROW(parse_report_format("xml"), ValueError);
}

TEST(Builtins, NamesAndLookup) {
  EXPECT_EQ(builtin_names(), (std::vector<std::string>{"bell-protocol", "double-life", "epr-alice", "epr-bob",
                                                       "partial-event", "partial-link"}));
  for (const auto& name : builtin_names()) EXPECT_NO_THROW(run_scenario(builtin_scenario(name))) << name;
  EXPECT_THROW(builtin_text("nope"), ValueError);
}
