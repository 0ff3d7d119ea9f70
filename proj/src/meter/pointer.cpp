#include "moments/meter/pointer.hpp"

#include <algorithm>
#include <cmath>

namespace moments {

PointerRegister::PointerRegister(std::string name, std::size_t dimension)
    : name_(std::move(name)), dimension_(dimension) {
  if (dimension_ < kMinimumDimension || dimension_ % 2 == 0) {
    throw ValueError("pointer '" + name_ + "' needs an odd dimension >= 5, got " + std::to_string(dimension_));
  }
}

std::size_t PointerRegister::index_of(int position) const {
  if (std::abs(position) > half_width()) {
    throw ValueError("pointer position " + std::to_string(position) + " outside register '" + name_ + "'");
  }
  return static_cast<std::size_t>(position + half_width());
}

State PointerRegister::position_state(int position) const { return State::basis(layout(), index_of(position)); }

Op PointerRegister::shift(int steps) const {
  const auto d = static_cast<long>(dimension_);
  Op::Matrix m = Op::Matrix::Zero(d, d);
  for (long i = 0; i < d; ++i) {
    const long j = ((i + steps) % d + d) % d;
    m(j, i) = 1.0;
  }
  return Op(layout(), std::move(m));
}

std::size_t PointerRegister::minimal_dimension(int max_shift) {
  return std::max<std::size_t>(kMinimumDimension, 2 * static_cast<std::size_t>(std::abs(max_shift)) + 1);
}

int integer_spectral_radius(const Op& observable) {
  int radius = 0;
  for (const auto& c : spectral_decomposition(observable)) {
    if (c.eigenvalue != std::round(c.eigenvalue)) {
      throw ValueError("pointer coupling needs an integer spectrum; found eigenvalue " + std::to_string(c.eigenvalue));
    }
    radius = std::max(radius, static_cast<int>(std::abs(c.eigenvalue)));
  }
  return radius;
}

Op coupling_unitary(const Op& observable, const PointerRegister& pointer, int sign) {
  if (sign != 1 && sign != -1) throw ValueError("coupling sign must be +1 or -1");
  integer_spectral_radius(observable);
  RegisterLayout joint = observable.layout().concat(pointer.layout());
  const auto d = static_cast<Eigen::Index>(joint.dimension());
  Op::Matrix total = Op::Matrix::Zero(d, d);
  for (const auto& c : spectral_decomposition(observable)) {
    const int steps = sign * static_cast<int>(c.eigenvalue);
    total += tensor(c.projector, pointer.shift(steps)).matrix();
  }
  return Op(std::move(joint), std::move(total));
}

std::map<int, double> pointer_distribution(const State& joint, const std::string& pointer) {
  const auto probs = register_probabilities(joint, pointer);
  const int half = static_cast<int>((probs.size() - 1) / 2);
  double total = 0;
  for (double p : probs) total += p;
  if (!(total > 0)) throw ValueError("pointer distribution of a zero state");
  std::map<int, double> out;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0) out[static_cast<int>(i) - half] = probs[i] / total;
  }
  return out;
}

State apply_coupling(const State& joint, const CouplingEvent& event) {
  const std::size_t p = joint.layout().index_of(event.pointer);
  const PointerRegister pointer(event.pointer, joint.layout()[p].dimension);
  const int radius = integer_spectral_radius(event.observable);

  // Populated positions: anything carrying more than round-off weight.
  const auto probs = register_probabilities(joint, event.pointer);
  const double total = std::max(joint.squared_norm(), 1e-300);
  int reach = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] / total > 1e-24) reach = std::max(reach, std::abs(pointer.position_of(i)));
  }
  if (reach + radius > pointer.half_width()) {
    throw PointerWraparound(event.pointer, pointer.dimension(), PointerRegister::minimal_dimension(reach + radius));
  }
  return apply(coupling_unitary(event.observable, pointer, event.sign), joint);
}

MeasurementBasis eigenbasis(Axis axis) {
  return {axis_state<double>(axis, true), axis_state<double>(axis, false)};
}

namespace {

void check_strengths(double alpha, double beta) {
  if (!(alpha >= 0) || !(beta >= 0)) throw ValueError("partial measurement strengths must be >= 0");
  if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-12) {
    throw ValueError("partial measurement needs alpha^2 + beta^2 = 1");
  }
}

void check_basis(const MeasurementBasis& basis) {
  if (basis.plus.dimension() != 2 || !basis.plus.layout().same_shape(basis.minus.layout())) {
    throw ValueError("partial measurement basis must be two qubit states");
  }
  if (!basis.plus.is_normalized(1e-10) || !basis.minus.is_normalized(1e-10) ||
      std::abs(inner(basis.plus, basis.minus)) > 1e-10) {
    throw ValueError("partial measurement basis must be orthonormal");
  }
}

}  // namespace

std::array<Op, 2> partial_kraus(const MeasurementBasis& basis, double alpha, double beta) {
  check_strengths(alpha, beta);
  check_basis(basis);
  const Op pp = Op::outer(basis.plus, basis.plus);
  const Op mm(pp.layout(), basis.minus.amplitudes() * basis.minus.amplitudes().adjoint());
  return {alpha * pp + beta * mm, beta * pp + alpha * mm};
}

Op partial_measurement_unitary(const MeasurementBasis& basis, double alpha, double beta, const std::string& system,
                               const std::string& meter) {
  check_strengths(alpha, beta);
  check_basis(basis);
  const RegisterLayout meter_layout = RegisterLayout::single(meter, 3);
  // Columns: input |0>, |+1>, |-1>.
  Op::Matrix w_plus(3, 3);
  w_plus << 0, 0, 1,
            alpha, -beta, 0,
            beta, alpha, 0;
  Op::Matrix w_minus(3, 3);
  w_minus << 0, 0, 1,
             beta, alpha, 0,
             alpha, -beta, 0;
  const Op plus_proj = Op::outer(basis.plus, basis.plus).on(system);
  const Op minus_proj = Op(plus_proj.layout(), Op::outer(basis.minus, basis.minus).matrix());
  return tensor(plus_proj, Op(meter_layout, w_plus)) + tensor(minus_proj, Op(meter_layout, w_minus));
}

PartialOutcome partial_measurement(const State& joint, const std::string& system, const MeasurementBasis& basis,
                                   double alpha, double beta, int outcome) {
  if (outcome != 1 && outcome != -1) throw ValueError("partial measurement outcome must be +1 or -1");
  std::string meter = "partial_meter";
  while (joint.layout().contains(meter)) meter += "_";
  const Op u = partial_measurement_unitary(basis, alpha, beta, system, meter);
  const State coupled = apply(u, tensor(joint, State::basis(RegisterLayout::single(meter, 3), 0)));
  const State reading = State::basis(RegisterLayout::single(meter, 3), outcome == 1 ? 1 : 2);
  State conditioned = contract_bra(reading, coupled);
  const double p = conditioned.squared_norm();
  return {outcome, p > 0 ? conditioned.normalized() : conditioned, p};
}

std::array<PartialOutcome, 2> partial_measurement_outcomes(const State& joint, const std::string& system,
                                                           const MeasurementBasis& basis, double alpha, double beta) {
  return {partial_measurement(joint, system, basis, alpha, beta, +1),
          partial_measurement(joint, system, basis, alpha, beta, -1)};
}

}  // namespace moments
