#pragma once

#include <variant>

#include "moments/qcore.hpp"
#include "moments/time_index.hpp"

namespace moments {

// Connector between the future boundary of one moment and the past boundary
// of a later moment. Stored un-normalized: an identity link is the identity
// operator sum_i |i><i|, not the normalized maximally entangled two-time state.
class Link {
 public:
  struct Identity {};
  struct Unitary {
    Op u;
  };
  struct Collapse {
    State phi;
  };
  struct Partial {
    Op kraus;
  };
  using Payload = std::variant<Identity, Unitary, Collapse, Partial>;

  enum class Kind { identity, unitary, collapse, partial };

  static Link identity(TimeIndex from, TimeIndex to);
  static Link unitary(Op u, TimeIndex from, TimeIndex to, const Tolerances& tol = {});
  static Link collapse(State phi, TimeIndex from, TimeIndex to, const Tolerances& tol = {});
  // A unitary Kraus operator degenerates to a Unitary link.
  static Link partial(Op kraus, TimeIndex from, TimeIndex to, const Tolerances& tol = {});

  Kind kind() const { return static_cast<Kind>(payload_.index()); }
  const Payload& payload() const { return payload_; }
  TimeIndex from() const { return from_; }
  TimeIndex to() const { return to_; }
  std::size_t stride() const { return to_.k - from_.k; }

  // Identity and unitary links preserve the norm; collapse and partial links
  // condition on an outcome.
  bool preserves_norm() const { return kind() == Kind::identity || kind() == Kind::unitary; }

 private:
  Link(Payload payload, TimeIndex from, TimeIndex to);

  Payload payload_;
  TimeIndex from_;
  TimeIndex to_;
};

// Identity -> I, Unitary -> U, Collapse(phi) -> |phi><phi|, Partial -> K,
// expressed on `system` (register names taken from it).
Op link_matrix(const Link& link, const RegisterLayout& system);

}  // namespace moments
