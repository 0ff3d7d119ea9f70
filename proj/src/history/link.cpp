#include "moments/history/link.hpp"

namespace moments {

Link::Link(Payload payload, TimeIndex from, TimeIndex to) : payload_(std::move(payload)), from_(from), to_(to) {
  if (to_ <= from_) {
    throw ValueError("link must point forward in time: " + to_string(from_) + " -> " + to_string(to_));
  }
}

Link Link::identity(TimeIndex from, TimeIndex to) { return Link(Identity{}, from, to); }

Link Link::unitary(Op u, TimeIndex from, TimeIndex to, const Tolerances& tol) {
  if (!u.is_unitary(tol.structural)) throw ValueError("unitary link operator is not unitary");
  return Link(Unitary{std::move(u)}, from, to);
}

Link Link::collapse(State phi, TimeIndex from, TimeIndex to, const Tolerances& tol) {
  if (!phi.is_normalized(tol.norm)) throw ValueError("collapse state must be normalized");
  return Link(Collapse{std::move(phi)}, from, to);
}

Link Link::partial(Op kraus, TimeIndex from, TimeIndex to, const Tolerances& tol) {
  if (kraus.is_unitary(tol.structural)) return Link(Unitary{std::move(kraus)}, from, to);
  if (kraus.operator_norm() > 1.0 + tol.structural) throw ValueError("partial link operator must be a contraction");
  return Link(Partial{std::move(kraus)}, from, to);
}

Op link_matrix(const Link& link, const RegisterLayout& system) {
  const auto on_system = [&](const Op& op) {
    if (!op.layout().same_shape(system)) throw LayoutError("link operator does not match the system layout");
    const auto names = system.names();
    return op.relabeled(names);
  };
  return std::visit(
      [&](const auto& p) -> Op {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Link::Identity>) {
          return Op::identity(system);
        } else if constexpr (std::is_same_v<T, Link::Unitary>) {
          return on_system(p.u);
        } else if constexpr (std::is_same_v<T, Link::Collapse>) {
          return on_system(Op::outer(p.phi, p.phi));
        } else {
          return on_system(p.kraus);
        }
      },
      link.payload());
}

}  // namespace moments
