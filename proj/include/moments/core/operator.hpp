#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <string>

#include "moments/core/layout.hpp"
#include "moments/core/state_vector.hpp"
#include "moments/errors.hpp"

namespace moments {

// Dense operator on a register layout. Structural properties (unitary,
// hermitian, projector) are checked numerically on request rather than stored.
template <typename Real = double>
class Operator {
 public:
  using Scalar = std::complex<Real>;
  using Matrix = MatrixX<Real>;

  Operator() = default;

  Operator(RegisterLayout layout, Matrix matrix) : layout_(std::move(layout)), matrix_(std::move(matrix)) {
    const auto d = static_cast<Eigen::Index>(layout_.dimension());
    if (matrix_.rows() != d || matrix_.cols() != d) {
      throw LayoutError("operator matrix is " + std::to_string(matrix_.rows()) + "x" +
                        std::to_string(matrix_.cols()) + " but layout dimension is " + std::to_string(d));
    }
    if (!matrix_.allFinite()) throw ValueError("operator entries must be finite");
  }

  static Operator identity(RegisterLayout layout) {
    const auto d = static_cast<Eigen::Index>(layout.dimension());
    return Operator(std::move(layout), Matrix::Identity(d, d));
  }

  // |ket><bra| on the ket's layout.
  static Operator outer(const StateVector<Real>& ket, const StateVector<Real>& bra) {
    if (!ket.layout().same_shape(bra.layout())) throw LayoutError("outer product of states with different shapes");
    return Operator(ket.layout(), ket.amplitudes() * bra.amplitudes().adjoint());
  }

  const RegisterLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t dimension() const { return layout_.dimension(); }

  Operator adjoint() const { return Operator(layout_, matrix_.adjoint()); }

  bool is_unitary(Real tol = Real(1e-10)) const {
    const auto d = matrix_.rows();
    return (matrix_.adjoint() * matrix_ - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol;
  }
  bool is_hermitian(Real tol = Real(1e-10)) const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol;
  }
  bool is_projector(Real tol = Real(1e-10)) const {
    return is_hermitian(tol) && (matrix_ * matrix_ - matrix_).cwiseAbs().maxCoeff() <= tol;
  }
  // Largest singular value.
  Real operator_norm() const {
    Eigen::JacobiSVD<Matrix> svd(matrix_);
    return svd.singularValues().size() ? svd.singularValues()(0) : Real(0);
  }

  Operator relabeled(std::span<const std::string> names) const { return Operator(layout_.renamed(names), matrix_); }
  Operator on(std::string name) const {
    const std::string names[] = {std::move(name)};
    return relabeled(names);
  }

  template <typename Other>
  Operator<Other> cast() const {
    return Operator<Other>(layout_, matrix_.template cast<std::complex<Other>>());
  }

  friend Operator operator*(const Operator& a, const Operator& b) {
    a.require_same_shape(b);
    return Operator(a.layout_, a.matrix_ * b.matrix_);
  }
  friend Operator operator+(const Operator& a, const Operator& b) {
    a.require_same_shape(b);
    return Operator(a.layout_, a.matrix_ + b.matrix_);
  }
  friend Operator operator-(const Operator& a, const Operator& b) {
    a.require_same_shape(b);
    return Operator(a.layout_, a.matrix_ - b.matrix_);
  }
  friend Operator operator*(Scalar c, const Operator& a) { return Operator(a.layout_, c * a.matrix_); }

 private:
  void require_same_shape(const Operator& other) const {
    if (!layout_.same_shape(other.layout_)) throw LayoutError("operators act on different shapes");
  }

  RegisterLayout layout_;
  Matrix matrix_;
};

// Largest absolute entry of a - b.
template <typename Real>
Real max_abs_difference(const Operator<Real>& a, const Operator<Real>& b) {
  if (!a.layout().same_shape(b.layout())) throw LayoutError("operators act on different shapes");
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

using Op = Operator<double>;

}  // namespace moments
