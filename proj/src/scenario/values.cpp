#include <string>

#include "lexer.hpp"
#include "moments/scenario/scenario.hpp"

namespace moments::scenario {

namespace {

constexpr double kLiteralTolerance = 1e-10;

void require_qubits(const RegisterLayout& layout, std::size_t count, const char* what) {
  bool ok = layout.size() == count;
  for (const auto& reg : layout) ok = ok && reg.dimension == 2;
  if (!ok) {
    throw ValueError(std::string(what) + " needs " + (count == 1 ? "one qubit" : std::to_string(count) + " qubits"));
  }
}

MatrixX<double> to_matrix(const MatrixLiteral& rows) {
  const auto d = static_cast<Eigen::Index>(rows.size());
  MatrixX<double> m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return m;
}

Op literal_operator(const MatrixLiteral& rows, const std::string& reg, std::size_t dimension) {
  if (rows.size() != dimension) {
    throw ValueError("matrix is " + std::to_string(rows.size()) + "x" + std::to_string(rows.size()) + " but '" + reg +
                     "' has dimension " + std::to_string(dimension));
  }
  return Op(RegisterLayout::single(reg, dimension), to_matrix(rows));
}

}  // namespace

State make_state(const StateSpec& spec, const RegisterLayout& layout) {
  return std::visit(
      [&](const auto& s) -> State {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, KetState>) {
          if (s.amplitudes.size() != layout.dimension()) {
            throw ValueError("ket has " + std::to_string(s.amplitudes.size()) + " amplitudes; expected " +
                             std::to_string(layout.dimension()));
          }
          VectorX<double> v(static_cast<Eigen::Index>(s.amplitudes.size()));
          for (std::size_t i = 0; i < s.amplitudes.size(); ++i) v(static_cast<Eigen::Index>(i)) = s.amplitudes[i];
          State state(layout, std::move(v));
          if (std::abs(state.squared_norm() - 1) > kLiteralTolerance) {
            throw ValueError("unnormalized state (squared norm " + detail::format_real(state.squared_norm()) + ")");
          }
          return state;
        } else if constexpr (std::is_same_v<T, BasisState>) {
          return State::basis(layout, s.index);
        } else if constexpr (std::is_same_v<T, AxisState>) {
          require_qubits(layout, 1, "axis state");
          return axis_state(s.axis, s.up, layout[0].name);
        } else if constexpr (std::is_same_v<T, SpinState>) {
          require_qubits(layout, 1, "spin state");
          return spin_up(s.theta, s.phi, layout[0].name);
        } else if constexpr (std::is_same_v<T, SingletState>) {
          require_qubits(layout, 2, "singlet");
          return singlet(layout[0].name, layout[1].name);
        } else {
          require_qubits(layout, 2, "bell state");
          return bell_state(s.which, layout[0].name, layout[1].name);
        }
      },
      spec);
}

Op make_observable(const ObservableSpec& spec, const std::string& reg, std::size_t dimension) {
  return std::visit(
      [&](const auto& s) -> Op {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, MatrixObservable>) {
          Op op = literal_operator(s.rows, reg, dimension);
          if (!op.is_hermitian(kLiteralTolerance)) throw ValueError("observable matrix is not hermitian");
          return op;
        } else {
          if (dimension != 2) throw ValueError("'" + reg + "' is not a qubit");
          if constexpr (std::is_same_v<T, PauliObservable>) {
            return pauli(s.axis, reg);
          } else {
            return spin_observable(s.theta, s.phi, reg);
          }
        }
      },
      spec);
}

Op make_unitary(const UnitarySpec& spec, const std::string& reg, std::size_t dimension) {
  if (const auto* m = std::get_if<MatrixUnitary>(&spec)) {
    Op op = literal_operator(m->rows, reg, dimension);
    if (!op.is_unitary(kLiteralTolerance)) throw ValueError("non-unitary matrix");
    return op;
  }
  const auto& named = std::get<NamedUnitary>(spec);
  if (dimension != 2) throw ValueError("'" + reg + "' is not a qubit");
  if (named.name == "h") return hadamard(reg);
  if (named.name == "rx") return rotation_x(named.angle, reg);
  if (named.name == "ry") return rotation_y(named.angle, reg);
  if (named.name == "rz") return rotation_z(named.angle, reg);
  throw ValueError("unknown unitary '" + named.name + "'");
}

}  // namespace moments::scenario
