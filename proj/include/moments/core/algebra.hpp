#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "moments/core/indexing.hpp"
#include "moments/core/operator.hpp"
#include "moments/core/state_vector.hpp"

namespace moments {

namespace detail {

inline std::vector<std::size_t> register_indices(const RegisterLayout& full, const RegisterLayout& sub) {
  std::vector<std::size_t> idx;
  idx.reserve(sub.size());
  for (const auto& r : sub) {
    const std::size_t i = full.index_of(r.name);
    if (full[i].dimension != r.dimension) {
      throw LayoutError("register '" + r.name + "' has dimension " + std::to_string(full[i].dimension) +
                        ", operand expects " + std::to_string(r.dimension));
    }
    idx.push_back(i);
  }
  return idx;
}

}  // namespace detail

// Kronecker products. The left operand's registers come first (slower).
template <typename Real>
StateVector<Real> tensor(const StateVector<Real>& a, const StateVector<Real>& b,
                         std::size_t cap = kDefaultDimensionCap) {
  RegisterLayout layout = a.layout().concat(b.layout(), cap);
  const auto da = a.amplitudes().size();
  const auto db = b.amplitudes().size();
  VectorX<Real> v(da * db);
  for (Eigen::Index i = 0; i < da; ++i) v.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
  return StateVector<Real>(std::move(layout), std::move(v));
}

template <typename Real, typename... Rest>
StateVector<Real> tensor(const StateVector<Real>& a, const StateVector<Real>& b, const StateVector<Real>& c,
                         const Rest&... rest) {
  return tensor(tensor(a, b), c, rest...);
}

template <typename Real>
Operator<Real> tensor(const Operator<Real>& a, const Operator<Real>& b, std::size_t cap = kDefaultDimensionCap) {
  RegisterLayout layout = a.layout().concat(b.layout(), cap);
  const auto da = a.matrix().rows();
  const auto db = b.matrix().rows();
  MatrixX<Real> m(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) m.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  }
  return Operator<Real>(std::move(layout), std::move(m));
}

template <typename Real, typename... Rest>
Operator<Real> tensor(const Operator<Real>& a, const Operator<Real>& b, const Operator<Real>& c, const Rest&... rest) {
  return tensor(tensor(a, b), c, rest...);
}

// Applies `op` to the registers of `state` named by the operator's layout
// (in the operator's register order); other registers are untouched.
template <typename Real>
StateVector<Real> apply(const Operator<Real>& op, const StateVector<Real>& state) {
  const auto targets = detail::register_indices(state.layout(), op.layout());
  const SubsystemIndex idx = subsystem_index(state.layout(), targets);
  const auto& m = op.matrix();
  const auto& in = state.amplitudes();
  VectorX<Real> out(in.size());
  const auto sub = static_cast<Eigen::Index>(idx.offsets.size());
  VectorX<Real> gathered(sub);
  VectorX<Real> mapped(sub);
  for (std::size_t base : idx.bases) {
    for (Eigen::Index j = 0; j < sub; ++j) gathered(j) = in(static_cast<Eigen::Index>(base + idx.offsets[j]));
    mapped.noalias() = m * gathered;
    for (Eigen::Index j = 0; j < sub; ++j) out(static_cast<Eigen::Index>(base + idx.offsets[j])) = mapped(j);
  }
  return StateVector<Real>(state.layout(), std::move(out));
}

// <state| op |state>.
template <typename Real>
std::complex<Real> expectation(const Operator<Real>& op, const StateVector<Real>& state) {
  return state.amplitudes().dot(apply(op, state).amplitudes());
}

template <typename Real>
struct Projection {
  StateVector<Real> state;  // P|s>, sub-normalized
  Real probability;         // ||P|s>||^2
};

// Born-rule projection. The projector acts on the registers its layout names.
template <typename Real>
Projection<Real> project(const StateVector<Real>& state, const Operator<Real>& projector,
                         Real tol = Real(1e-10)) {
  if (!projector.is_projector(tol)) throw ValueError("project: operator is not a projector");
  StateVector<Real> out = apply(projector, state);
  const Real p = out.squared_norm();
  return {std::move(out), p};
}

template <typename Real>
Projection<Real> project(const StateVector<Real>& state, const std::string& reg, const Operator<Real>& projector,
                         Real tol = Real(1e-10)) {
  if (projector.layout().size() != 1) throw LayoutError("project: single-register projector expected");
  return project(state, projector.on(reg), tol);
}

// Partial inner product (<bra| tensor I)|state>: removes the bra's registers
// from the state; the remaining registers keep their order.
template <typename Real>
StateVector<Real> contract_bra(const StateVector<Real>& bra, const StateVector<Real>& state) {
  const auto targets = detail::register_indices(state.layout(), bra.layout());
  const SubsystemIndex idx = subsystem_index(state.layout(), targets);
  RegisterLayout rest = state.layout().without(bra.layout().names());
  const auto& in = state.amplitudes();
  const auto& b = bra.amplitudes();
  VectorX<Real> out(static_cast<Eigen::Index>(idx.bases.size()));
  for (std::size_t r = 0; r < idx.bases.size(); ++r) {
    std::complex<Real> acc(0);
    for (std::size_t j = 0; j < idx.offsets.size(); ++j) {
      acc += std::conj(b(static_cast<Eigen::Index>(j))) * in(static_cast<Eigen::Index>(idx.bases[r] + idx.offsets[j]));
    }
    out(static_cast<Eigen::Index>(r)) = acc;
  }
  return StateVector<Real>(std::move(rest), std::move(out));
}

// Reorders registers: new register i is old register order[i].
template <typename Real>
StateVector<Real> permute(const StateVector<Real>& state, std::span<const std::size_t> order) {
  RegisterLayout target = state.layout().permuted(order);
  const auto& src = state.layout();
  std::vector<std::size_t> new_stride_of_old(src.size());
  for (std::size_t i = 0; i < order.size(); ++i) new_stride_of_old[order[i]] = target.stride(i);
  VectorX<Real> out(state.amplitudes().size());
  for (std::size_t flat = 0; flat < src.dimension(); ++flat) {
    const auto digits = digits_of(src, flat);
    std::size_t k = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) k += digits[i] * new_stride_of_old[i];
    out(static_cast<Eigen::Index>(k)) = state.amplitudes()(static_cast<Eigen::Index>(flat));
  }
  return StateVector<Real>(std::move(target), std::move(out));
}

template <typename Real>
StateVector<Real> permute(const StateVector<Real>& state, std::span<const std::string> names) {
  std::vector<std::size_t> order;
  for (const auto& n : names) order.push_back(state.layout().index_of(n));
  return permute(state, std::span<const std::size_t>(order));
}

// Reduced density matrix on `keep` (in the given order).
template <typename Real>
MatrixX<Real> reduced_density_matrix(const StateVector<Real>& state, std::span<const std::string> keep) {
  std::vector<std::size_t> targets;
  for (const auto& n : keep) targets.push_back(state.layout().index_of(n));
  const SubsystemIndex idx = subsystem_index(state.layout(), targets);
  const auto d = static_cast<Eigen::Index>(idx.offsets.size());
  MatrixX<Real> rho = MatrixX<Real>::Zero(d, d);
  const auto& a = state.amplitudes();
  for (std::size_t base : idx.bases) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto ai = a(static_cast<Eigen::Index>(base + idx.offsets[i]));
      if (ai == std::complex<Real>(0)) continue;
      for (Eigen::Index j = 0; j < d; ++j) rho(i, j) += ai * std::conj(a(static_cast<Eigen::Index>(base + idx.offsets[j])));
    }
  }
  return rho;
}

// Probability of each value of one register (unnormalized if the state is).
template <typename Real>
std::vector<Real> register_probabilities(const StateVector<Real>& state, const std::string& reg) {
  const std::size_t r = state.layout().index_of(reg);
  const std::size_t stride = state.layout().stride(r);
  const std::size_t d = state.layout()[r].dimension;
  std::vector<Real> p(d, Real(0));
  for (std::size_t flat = 0; flat < state.dimension(); ++flat) p[(flat / stride) % d] += std::norm(state[flat]);
  return p;
}

template <typename Real>
struct SpectralComponent {
  Real eigenvalue;
  Operator<Real> projector;
};

// Eigenprojectors of a hermitian operator, eigenvalues descending; eigenvalues
// closer than `merge_tol` share one projector.
template <typename Real>
std::vector<SpectralComponent<Real>> spectral_decomposition(const Operator<Real>& observable,
                                                            Real hermitian_tol = Real(1e-10),
                                                            Real merge_tol = Real(1e-9)) {
  if (!observable.is_hermitian(hermitian_tol)) throw ValueError("observable is not hermitian");
  using ColMajor = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<ColMajor> solver(ColMajor(observable.matrix()));
  if (solver.info() != Eigen::Success) throw ValueError("eigendecomposition failed");
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  std::vector<SpectralComponent<Real>> out;
  // Eigen returns ascending eigenvalues; walk from the top.
  Eigen::Index i = values.size() - 1;
  while (i >= 0) {
    Eigen::Index j = i;
    while (j - 1 >= 0 && std::abs(values(j - 1) - values(i)) <= merge_tol) --j;
    MatrixX<Real> p = MatrixX<Real>::Zero(values.size(), values.size());
    Real sum = 0;
    for (Eigen::Index k = j; k <= i; ++k) {
      p += vectors.col(k) * vectors.col(k).adjoint();
      sum += values(k);
    }
    Real value = sum / static_cast<Real>(i - j + 1);
    // Snap numerically integral eigenvalues so outcome labels are exact.
    if (std::abs(value - std::round(value)) <= merge_tol) value = std::round(value);
    if (value == Real(0)) value = Real(0);
    out.push_back({value, Operator<Real>(observable.layout(), std::move(p))});
    i = j - 1;
  }
  return out;
}

}  // namespace moments
