#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <numbers>
#include <string>
#include <type_traits>

#include "moments/core/algebra.hpp"
#include "moments/core/operator.hpp"
#include "moments/core/state_vector.hpp"

namespace moments {

template <typename Real = double>
StateVector<Real> ket(std::string name, std::initializer_list<std::type_identity_t<std::complex<Real>>> amplitudes) {
  VectorX<Real> v(static_cast<Eigen::Index>(amplitudes.size()));
  Eigen::Index i = 0;
  for (const auto& a : amplitudes) v(i++) = a;
  return StateVector<Real>(RegisterLayout::single(std::move(name), amplitudes.size()), std::move(v));
}

template <typename Real = double>
Operator<Real> qubit_operator(std::string name, std::complex<Real> a, std::complex<Real> b, std::complex<Real> c,
                              std::complex<Real> d) {
  MatrixX<Real> m(2, 2);
  m << a, b, c, d;
  return Operator<Real>(RegisterLayout::single(std::move(name), 2), std::move(m));
}

template <typename Real = double>
Operator<Real> pauli_x(std::string name = "q") {
  return qubit_operator<Real>(std::move(name), 0, 1, 1, 0);
}
template <typename Real = double>
Operator<Real> pauli_y(std::string name = "q") {
  using C = std::complex<Real>;
  return qubit_operator<Real>(std::move(name), 0, C(0, -1), C(0, 1), 0);
}
template <typename Real = double>
Operator<Real> pauli_z(std::string name = "q") {
  return qubit_operator<Real>(std::move(name), 1, 0, 0, -1);
}

template <typename Real = double>
Operator<Real> identity_operator(std::string name = "q", std::size_t dimension = 2) {
  return Operator<Real>::identity(RegisterLayout::single(std::move(name), dimension));
}

// sigma_n = sin(theta)cos(phi) X + sin(theta)sin(phi) Y + cos(theta) Z.
template <typename Real = double>
Operator<Real> spin_observable(Real theta, Real phi, std::string name = "q") {
  using C = std::complex<Real>;
  const Real nx = std::sin(theta) * std::cos(phi);
  const Real ny = std::sin(theta) * std::sin(phi);
  const Real nz = std::cos(theta);
  return qubit_operator<Real>(std::move(name), C(nz), C(nx, -ny), C(nx, ny), C(-nz));
}

// +1 eigenvector of spin_observable(theta, phi).
template <typename Real = double>
StateVector<Real> spin_up(Real theta, Real phi, std::string name = "q") {
  return ket<Real>(std::move(name), {std::complex<Real>(std::cos(theta / 2)), std::polar(std::sin(theta / 2), phi)});
}

// -1 eigenvector of spin_observable(theta, phi).
template <typename Real = double>
StateVector<Real> spin_down(Real theta, Real phi, std::string name = "q") {
  return ket<Real>(std::move(name), {std::complex<Real>(std::sin(theta / 2)), -std::polar(std::cos(theta / 2), phi)});
}

enum class Axis { x, y, z };

template <typename Real = double>
Operator<Real> pauli(Axis axis, std::string name = "q") {
  switch (axis) {
    case Axis::x: return pauli_x<Real>(std::move(name));
    case Axis::y: return pauli_y<Real>(std::move(name));
    case Axis::z: break;
  }
  return pauli_z<Real>(std::move(name));
}

template <typename Real = double>
StateVector<Real> axis_state(Axis axis, bool up, std::string name = "q") {
  constexpr Real half_pi = std::numbers::pi_v<Real> / 2;
  switch (axis) {
    case Axis::x: return up ? spin_up<Real>(half_pi, 0, std::move(name)) : spin_down<Real>(half_pi, 0, std::move(name));
    case Axis::y:
      return up ? spin_up<Real>(half_pi, half_pi, std::move(name)) : spin_down<Real>(half_pi, half_pi, std::move(name));
    case Axis::z: break;
  }
  return up ? ket<Real>(std::move(name), {1, 0}) : ket<Real>(std::move(name), {0, 1});
}

template <typename Real = double>
Operator<Real> rotation_x(Real angle, std::string name = "q") {
  using C = std::complex<Real>;
  const Real c = std::cos(angle / 2);
  const Real s = std::sin(angle / 2);
  return qubit_operator<Real>(std::move(name), C(c), C(0, -s), C(0, -s), C(c));
}
template <typename Real = double>
Operator<Real> rotation_y(Real angle, std::string name = "q") {
  const Real c = std::cos(angle / 2);
  const Real s = std::sin(angle / 2);
  return qubit_operator<Real>(std::move(name), c, -s, s, c);
}
template <typename Real = double>
Operator<Real> rotation_z(Real angle, std::string name = "q") {
  return qubit_operator<Real>(std::move(name), std::polar(Real(1), -angle / 2), 0, 0, std::polar(Real(1), angle / 2));
}
template <typename Real = double>
Operator<Real> hadamard(std::string name = "q") {
  const Real r = Real(1) / std::sqrt(Real(2));
  return qubit_operator<Real>(std::move(name), r, r, r, -r);
}

enum class Bell { phi_plus, phi_minus, psi_plus, psi_minus };

// Bell state on registers (a, b); phi_plus = (|00> + |11>)/sqrt(2).
template <typename Real = double>
StateVector<Real> bell_state(Bell which, std::string a = "a", std::string b = "b") {
  const Real r = Real(1) / std::sqrt(Real(2));
  VectorX<Real> v = VectorX<Real>::Zero(4);
  switch (which) {
    case Bell::phi_plus: v(0) = r; v(3) = r; break;
    case Bell::phi_minus: v(0) = r; v(3) = -r; break;
    case Bell::psi_plus: v(1) = r; v(2) = r; break;
    case Bell::psi_minus: v(1) = r; v(2) = -r; break;
  }
  return StateVector<Real>(RegisterLayout({{std::move(a), 2}, {std::move(b), 2}}), std::move(v));
}

// {phi+, phi-, psi+, psi-}.
template <typename Real = double>
std::array<StateVector<Real>, 4> bell_basis(std::string a = "a", std::string b = "b") {
  return {bell_state<Real>(Bell::phi_plus, a, b), bell_state<Real>(Bell::phi_minus, a, b),
          bell_state<Real>(Bell::psi_plus, a, b), bell_state<Real>(Bell::psi_minus, a, b)};
}

// (|up_x down_x> - |down_x up_x>)/sqrt(2), built in the x basis.
template <typename Real = double>
StateVector<Real> singlet(std::string a = "a", std::string b = "b") {
  const Real r = Real(1) / std::sqrt(Real(2));
  const auto ua = axis_state<Real>(Axis::x, true, a);
  const auto da = axis_state<Real>(Axis::x, false, a);
  const auto ub = axis_state<Real>(Axis::x, true, b);
  const auto db = axis_state<Real>(Axis::x, false, b);
  VectorX<Real> v = r * (tensor(ua, db).amplitudes() - tensor(da, ub).amplitudes());
  return StateVector<Real>(tensor(ua, db).layout(), std::move(v));
}

}  // namespace moments
