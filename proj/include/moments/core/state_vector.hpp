#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>

#include "moments/core/layout.hpp"
#include "moments/errors.hpp"

namespace moments {

template <typename Real>
using Amplitude = std::complex<Real>;

template <typename Real>
using VectorX = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

// Row-major: entry (r, c) is matrix.data()[r * dim + c].
template <typename Real>
using MatrixX = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Amplitudes over a register layout. Not required to be normalized:
// conditioned (projected) states are sub-normalized.
template <typename Real = double>
class StateVector {
 public:
  using Scalar = std::complex<Real>;
  using Vector = VectorX<Real>;

  StateVector() : amplitudes_(Vector::Ones(1)) {}

  StateVector(RegisterLayout layout, Vector amplitudes)
      : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != layout_.dimension()) {
      throw LayoutError("state has " + std::to_string(amplitudes_.size()) + " amplitudes but layout dimension is " +
                        std::to_string(layout_.dimension()));
    }
    if (!amplitudes_.allFinite()) throw ValueError("state amplitudes must be finite");
  }

  static StateVector basis(RegisterLayout layout, std::size_t index) {
    if (index >= layout.dimension()) throw ValueError("basis index out of range");
    Vector v = Vector::Zero(static_cast<Eigen::Index>(layout.dimension()));
    v(static_cast<Eigen::Index>(index)) = Scalar(1);
    return StateVector(std::move(layout), std::move(v));
  }

  const RegisterLayout& layout() const { return layout_; }
  const Vector& amplitudes() const { return amplitudes_; }
  std::size_t dimension() const { return layout_.dimension(); }
  Scalar operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

  Real squared_norm() const { return amplitudes_.squaredNorm(); }
  Real norm() const { return amplitudes_.norm(); }
  bool is_normalized(Real tol = Real(1e-12)) const { return std::abs(norm() - Real(1)) <= tol; }

  StateVector normalized() const {
    const Real n = norm();
    if (!(n > Real(0))) throw ValueError("cannot normalize a zero state");
    return StateVector(layout_, amplitudes_ / n);
  }

  StateVector scaled(Scalar c) const { return StateVector(layout_, amplitudes_ * c); }

  StateVector relabeled(std::span<const std::string> names) const {
    return StateVector(layout_.renamed(names), amplitudes_);
  }
  // Single-register convenience.
  StateVector on(std::string name) const {
    const std::string names[] = {std::move(name)};
    return relabeled(names);
  }

  template <typename Other>
  StateVector<Other> cast() const {
    return StateVector<Other>(layout_, amplitudes_.template cast<std::complex<Other>>());
  }

 private:
  RegisterLayout layout_;
  Vector amplitudes_;
};

// <bra|ket>; the layouts must have the same shape (names are not compared).
template <typename Real>
std::complex<Real> inner(const StateVector<Real>& bra, const StateVector<Real>& ket) {
  if (!bra.layout().same_shape(ket.layout())) throw LayoutError("inner product of states with different shapes");
  return bra.amplitudes().dot(ket.amplitudes());
}

// |<a|b>|^2 / (<a|a><b|b>).
template <typename Real>
Real fidelity(const StateVector<Real>& a, const StateVector<Real>& b) {
  const Real na = a.squared_norm();
  const Real nb = b.squared_norm();
  if (!(na > 0) || !(nb > 0)) throw ValueError("fidelity of a zero state");
  return std::norm(inner(a, b)) / (na * nb);
}

template <typename Real>
bool equal_up_to_phase(const StateVector<Real>& a, const StateVector<Real>& b, Real tol = Real(1e-12)) {
  if (!a.layout().same_shape(b.layout())) return false;
  const std::complex<Real> overlap = inner(a, b);
  if (std::abs(overlap) <= tol) return a.norm() <= tol && b.norm() <= tol;
  const std::complex<Real> phase = overlap / std::abs(overlap);
  return (a.amplitudes() * phase - b.amplitudes()).norm() <= tol;
}

using State = StateVector<double>;

}  // namespace moments
