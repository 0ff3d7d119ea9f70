#pragma once

#include <array>
#include <map>
#include <string>

#include "moments/qcore.hpp"
#include "moments/time_index.hpp"

namespace moments {

// Finite cyclic pointer with positions q = -(d-1)/2 ... +(d-1)/2, stored at
// register index q + (d-1)/2. The shift S maps |q> to |q+1 mod d>.
class PointerRegister {
 public:
  static constexpr std::size_t kDefaultDimension = 7;
  static constexpr std::size_t kMinimumDimension = 5;

  explicit PointerRegister(std::string name, std::size_t dimension = kDefaultDimension);

  const std::string& name() const { return name_; }
  std::size_t dimension() const { return dimension_; }
  int half_width() const { return static_cast<int>((dimension_ - 1) / 2); }

  std::size_t index_of(int position) const;
  int position_of(std::size_t index) const { return static_cast<int>(index) - half_width(); }

  RegisterLayout layout() const { return RegisterLayout::single(name_, dimension_); }
  State position_state(int position) const;
  State ready_state() const { return position_state(0); }
  // S^steps (negative steps shift down).
  Op shift(int steps) const;

  // Smallest odd dimension >= 5 holding every position in [-max_shift, max_shift].
  static std::size_t minimal_dimension(int max_shift);

 private:
  std::string name_;
  std::size_t dimension_;
};

// Impulsive von Neumann coupling H = sign * delta(t - time) * A p. The
// observable's layout names the system register it acts on.
struct CouplingEvent {
  TimeIndex time;
  Op observable;
  std::string pointer;
  int sign = +1;
};

// Largest |eigenvalue|; throws ValueError unless the spectrum is integral.
int integer_spectral_radius(const Op& observable);

// sum_a P_a (x) S^(sign * a) on (observable registers..., pointer).
Op coupling_unitary(const Op& observable, const PointerRegister& pointer, int sign);

// Applies the coupling to a joint state that contains the pointer register.
// Throws PointerWraparound if any populated pointer position could be pushed
// past the register edge.
State apply_coupling(const State& joint, const CouplingEvent& event);

// Pointer-position distribution of a joint state (normalized over its norm).
std::map<int, double> pointer_distribution(const State& joint, const std::string& pointer);

// --- partial (weak-strength) measurement -----------------------------------

struct MeasurementBasis {
  State plus;   // outcome +1
  State minus;  // outcome -1
};

MeasurementBasis eigenbasis(Axis axis);

// Kraus pair {outcome +1, outcome -1}:
//   K+ = alpha |plus><plus| + beta |minus><minus|
//   K- = beta |plus><plus| + alpha |minus><minus|
std::array<Op, 2> partial_kraus(const MeasurementBasis& basis, double alpha, double beta);

// Unitary on (system, meter) with a 3-state meter labeled {0, +1, -1} at
// indices {0, 1, 2}:
//   |plus>|0>  -> |plus>(alpha|+1> + beta|-1>)
//   |minus>|0> -> |minus>(alpha|-1> + beta|+1>)
Op partial_measurement_unitary(const MeasurementBasis& basis, double alpha, double beta, const std::string& system,
                               const std::string& meter);

struct PartialOutcome {
  int outcome = 0;
  State state;  // conditioned and renormalized (zero if probability is 0)
  double probability = 0;
};

// Couples a fresh meter through partial_measurement_unitary and reads it in
// the given outcome.
PartialOutcome partial_measurement(const State& joint, const std::string& system, const MeasurementBasis& basis,
                                   double alpha, double beta, int outcome);

// Both outcomes, +1 first.
std::array<PartialOutcome, 2> partial_measurement_outcomes(const State& joint, const std::string& system,
                                                           const MeasurementBasis& basis, double alpha, double beta);

}  // namespace moments
