#pragma once

#include <Eigen/QR>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "moments/core/operator.hpp"
#include "moments/core/state_vector.hpp"

namespace moments {

// Haar-random unitary via QR of a complex Ginibre matrix with the phases of
// R's diagonal folded back into Q.
template <typename Real = double, typename Rng>
Operator<Real> haar_unitary(const RegisterLayout& layout, Rng& rng) {
  using ColMajor = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  std::normal_distribution<Real> normal(0, 1);
  const auto d = static_cast<Eigen::Index>(layout.dimension());
  ColMajor z(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) z(r, c) = std::complex<Real>(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<ColMajor> qr(z);
  ColMajor q = qr.householderQ();
  const ColMajor rmat = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < d; ++k) {
    const auto diag = rmat(k, k);
    const Real mag = std::abs(diag);
    q.col(k) *= mag > 0 ? diag / mag : std::complex<Real>(1);
  }
  return Operator<Real>(layout, MatrixX<Real>(q));
}

template <typename Real = double, typename Rng>
StateVector<Real> random_state(const RegisterLayout& layout, Rng& rng) {
  std::normal_distribution<Real> normal(0, 1);
  VectorX<Real> v(static_cast<Eigen::Index>(layout.dimension()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::complex<Real>(normal(rng), normal(rng));
  return StateVector<Real>(layout, v / v.norm());
}

// Uniform direction on the sphere as (theta, phi).
template <typename Real = double, typename Rng>
std::pair<Real, Real> random_direction(Rng& rng) {
  std::uniform_real_distribution<Real> u(0, 1);
  const Real theta = std::acos(1 - 2 * u(rng));
  const Real phi = 2 * std::numbers::pi_v<Real> * u(rng);
  return {theta, phi};
}

}  // namespace moments
