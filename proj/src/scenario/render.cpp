#include <string>

#include "lexer.hpp"
#include "moments/scenario/scenario.hpp"

namespace moments::scenario {

using detail::axis_name;
using detail::format_complex;
using detail::format_matrix;
using detail::format_real;

namespace {

std::string bell_name(Bell which) {
  switch (which) {
    case Bell::phi_plus: return "phi+";
    case Bell::phi_minus: return "phi-";
    case Bell::psi_plus: return "psi+";
    case Bell::psi_minus: break;
  }
  return "psi-";
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ",") + n;
  return out;
}

std::string at(std::size_t moment) { return "@" + std::to_string(moment); }

std::string optional_at(const std::optional<std::size_t>& moment) { return moment ? " " + at(*moment) : ""; }

std::string render_unitary(const UnitarySpec& spec) {
  if (const auto* m = std::get_if<MatrixUnitary>(&spec)) return format_matrix(m->rows);
  const auto& named = std::get<NamedUnitary>(spec);
  if (named.name == "h") return "h";
  return named.name + "(" + format_real(named.angle) + ")";
}

struct Renderer {
  std::string operator()(const SystemDecl& d) const {
    return "system " + d.name + (d.dimension == 2 ? " qubit" : " qudit " + std::to_string(d.dimension));
  }
  std::string operator()(const PrepareDecl& d) const {
    return "prepare " + join(d.systems) + optional_at(d.moment) + " " + render_state_spec(d.state);
  }
  std::string operator()(const LinkDecl& d) const {
    std::string out = "link " + d.system + " " + at(d.moment) + " ";
    std::visit(
        [&](const auto& kind) {
          using T = std::decay_t<decltype(kind)>;
          if constexpr (std::is_same_v<T, IdentityKind>) {
            out += "identity";
          } else if constexpr (std::is_same_v<T, UnitaryKind>) {
            out += "unitary " + render_unitary(kind.unitary);
          } else {
            out += "partial " + render_observable_spec(kind.basis) + " " + format_real(kind.alpha) + " " +
                   format_real(kind.beta);
          }
        },
        d.kind);
    if (d.stride != 1) out += " stride " + std::to_string(d.stride);
    return out;
  }
  std::string operator()(const CollapseDecl& d) const {
    return "collapse " + d.system + " " + at(d.moment) + " " + render_state_spec(d.state);
  }
  std::string operator()(const MeasureDecl& d) const {
    return "measure " + d.system + " " + at(d.moment) + " " + render_observable_spec(d.observable);
  }
  std::string operator()(const PartialDecl& d) const {
    return "partial " + d.system + " " + at(d.moment) + " " + render_observable_spec(d.basis) + " " +
           format_real(d.alpha) + " " + format_real(d.beta);
  }
  std::string operator()(const MeterDiffDecl& d) const {
    std::string out = "meter-diff " + d.label + " " + d.first_system + " " + at(d.first_moment) + " " +
                      d.second_system + " " + at(d.second_moment) + " " + render_observable_spec(d.observable);
    if (d.dimension) out += " dim " + std::to_string(*d.dimension);
    return out;
  }
  std::string operator()(const PostselectDecl& d) const {
    return "postselect " + join(d.systems) + optional_at(d.moment) + " " + render_state_spec(d.state);
  }
  std::string operator()(const BellpostDecl& d) const {
    return "bellpost " + d.first + "," + d.second + optional_at(d.moment);
  }
};

}  // namespace

std::string render_state_spec(const StateSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, KetState>) {
          std::string out = "ket";
          for (const auto& a : s.amplitudes) out += " " + format_complex(a);
          return out;
        } else if constexpr (std::is_same_v<T, BasisState>) {
          return "basis " + std::to_string(s.index);
        } else if constexpr (std::is_same_v<T, AxisState>) {
          return std::string(s.up ? "up " : "down ") + axis_name(s.axis);
        } else if constexpr (std::is_same_v<T, SpinState>) {
          return "spin " + format_real(s.theta) + " " + format_real(s.phi);
        } else if constexpr (std::is_same_v<T, SingletState>) {
          return "singlet";
        } else {
          return "bell " + bell_name(s.which);
        }
      },
      spec);
}

std::string render_observable_spec(const ObservableSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PauliObservable>) {
          return "pauli " + axis_name(s.axis);
        } else if constexpr (std::is_same_v<T, SpinObservable>) {
          return "spin " + format_real(s.theta) + " " + format_real(s.phi);
        } else {
          return "matrix " + format_matrix(s.rows);
        }
      },
      spec);
}

std::string render_scenario(const Scenario& scenario) {
  std::string out;
  for (const auto& d : scenario.directives) out += std::visit(Renderer{}, d.body) + "\n";
  return out;
}

}  // namespace moments::scenario
