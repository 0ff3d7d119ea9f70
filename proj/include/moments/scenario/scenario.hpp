#pragma once

// Line-oriented scenario description format.
//
//   # comment
//   system <name> qubit | system <name> qudit <d>
//   prepare <sys>[,<sys>...] [@k] <state>
//   link <sys> @k identity [stride s]
//   link <sys> @k unitary <unitary> [stride s]
//   link <sys> @k partial <observable> <alpha> <beta> [stride s]
//   collapse <sys> @k <state>
//   measure <sys> @k <observable>
//   partial <sys> @k <observable> <alpha> <beta>
//   meter-diff <label> <sys> @t1 <sys> @t2 <observable> [dim d]
//   postselect <sys>[,<sys>...] [@k] <state>
//   bellpost <sys>,<sys> [@k]
//
// `link`, `collapse` and `link ... partial` name the moment they lead INTO:
// `link A @3 identity stride 2` connects @1 to @3; `collapse A @k` connects
// @k-1 to @k. Events act at their moment after the incoming link.
//
//   <state>      ket <c> <c> ... | basis <i> | up <x|y|z> | down <x|y|z>
//                | spin <theta> <phi> | singlet | bell <phi+|phi-|psi+|psi->
//   <observable> pauli <x|y|z> | spin <theta> <phi> | matrix <literal>
//   <unitary>    h | rx(<angle>) | ry(<angle>) | rz(<angle>) | <literal>
//   <literal>    [[c,c,...],[c,c,...],...]   (rows)
//   <c>          complex number re+imi, e.g. 1, -0.5, 0.5-0.5i, i, 1/sqrt(2)
//   reals        decimal, pi, sqrt(x), combined with * and /, e.g. -3*pi/4

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "moments/core/spin.hpp"
#include "moments/errors.hpp"

namespace moments::scenario {

using Complex = std::complex<double>;
using MatrixLiteral = std::vector<std::vector<Complex>>;

struct KetState {
  std::vector<Complex> amplitudes;
  bool operator==(const KetState&) const = default;
};
struct BasisState {
  std::size_t index = 0;
  bool operator==(const BasisState&) const = default;
};
struct AxisState {
  Axis axis = Axis::z;
  bool up = true;
  bool operator==(const AxisState&) const = default;
};
struct SpinState {
  double theta = 0;
  double phi = 0;
  bool operator==(const SpinState&) const = default;
};
struct SingletState {
  bool operator==(const SingletState&) const = default;
};
struct BellState {
  Bell which = Bell::phi_plus;
  bool operator==(const BellState&) const = default;
};
using StateSpec = std::variant<KetState, BasisState, AxisState, SpinState, SingletState, BellState>;

struct PauliObservable {
  Axis axis = Axis::z;
  bool operator==(const PauliObservable&) const = default;
};
struct SpinObservable {
  double theta = 0;
  double phi = 0;
  bool operator==(const SpinObservable&) const = default;
};
struct MatrixObservable {
  MatrixLiteral rows;
  bool operator==(const MatrixObservable&) const = default;
};
using ObservableSpec = std::variant<PauliObservable, SpinObservable, MatrixObservable>;

struct NamedUnitary {
  std::string name;  // h, rx, ry, rz
  double angle = 0;  // unused for h
  bool operator==(const NamedUnitary&) const = default;
};
struct MatrixUnitary {
  MatrixLiteral rows;
  bool operator==(const MatrixUnitary&) const = default;
};
using UnitarySpec = std::variant<NamedUnitary, MatrixUnitary>;

struct IdentityKind {
  bool operator==(const IdentityKind&) const = default;
};
struct UnitaryKind {
  UnitarySpec unitary;
  bool operator==(const UnitaryKind&) const = default;
};
struct PartialKind {
  ObservableSpec basis;
  double alpha = 1;
  double beta = 0;
  bool operator==(const PartialKind&) const = default;
};

struct SystemDecl {
  std::string name;
  std::size_t dimension = 2;
  bool operator==(const SystemDecl&) const = default;
};
struct PrepareDecl {
  std::vector<std::string> systems;
  std::optional<std::size_t> moment;
  StateSpec state;
  bool operator==(const PrepareDecl&) const = default;
};
struct LinkDecl {
  std::string system;
  std::size_t moment = 0;
  std::size_t stride = 1;
  std::variant<IdentityKind, UnitaryKind, PartialKind> kind;
  bool operator==(const LinkDecl&) const = default;
};
struct CollapseDecl {
  std::string system;
  std::size_t moment = 0;
  StateSpec state;
  bool operator==(const CollapseDecl&) const = default;
};
struct MeasureDecl {
  std::string system;
  std::size_t moment = 0;
  ObservableSpec observable;
  bool operator==(const MeasureDecl&) const = default;
};
struct PartialDecl {
  std::string system;
  std::size_t moment = 0;
  ObservableSpec basis;
  double alpha = 1;
  double beta = 0;
  bool operator==(const PartialDecl&) const = default;
};
struct MeterDiffDecl {
  std::string label;
  std::string first_system;
  std::size_t first_moment = 0;
  std::string second_system;
  std::size_t second_moment = 0;
  ObservableSpec observable;
  std::optional<std::size_t> dimension;
  bool operator==(const MeterDiffDecl&) const = default;
};
struct PostselectDecl {
  std::vector<std::string> systems;
  std::optional<std::size_t> moment;
  StateSpec state;
  bool operator==(const PostselectDecl&) const = default;
};
struct BellpostDecl {
  std::string first;
  std::string second;
  std::optional<std::size_t> moment;
  bool operator==(const BellpostDecl&) const = default;
};

using DirectiveBody = std::variant<SystemDecl, PrepareDecl, LinkDecl, CollapseDecl, MeasureDecl, PartialDecl,
                                   MeterDiffDecl, PostselectDecl, BellpostDecl>;

struct SourcePosition {
  std::size_t line = 0;
  std::size_t column = 0;
};

struct Directive {
  DirectiveBody body;
  SourcePosition where;  // not part of equality

  bool operator==(const Directive& other) const { return body == other.body; }
};

struct Scenario {
  std::vector<Directive> directives;
  bool operator==(const Scenario&) const = default;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::string reason);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string reason_;
};

// Syntax and semantic validation; every error is a ParseError.
Scenario parse_scenario(std::string_view text);

// Canonical text form; parse_scenario(render_scenario(s)) == s.
std::string render_scenario(const Scenario& scenario);

// Standalone specs (as used on the command line); errors report column only.
StateSpec parse_state_spec(std::string_view text);
ObservableSpec parse_observable_spec(std::string_view text);
std::string render_state_spec(const StateSpec& spec);
std::string render_observable_spec(const ObservableSpec& spec);

// Concrete values on a register; throw ValueError / LayoutError on dimension mismatch.
State make_state(const StateSpec& spec, const RegisterLayout& layout);
Op make_observable(const ObservableSpec& spec, const std::string& reg, std::size_t dimension);
Op make_unitary(const UnitarySpec& spec, const std::string& reg, std::size_t dimension);

}  // namespace moments::scenario
