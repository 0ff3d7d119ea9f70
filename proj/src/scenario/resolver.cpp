#include "resolver.hpp"

#include <algorithm>
#include <set>

#include "lexer.hpp"

namespace moments::scenario::detail {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

std::string strand_name(const std::string& system, std::size_t start) {
  return system + "@" + std::to_string(start);
}

template <typename F>
auto checked(F&& f, const std::function<void(const std::string&)>& fail) {
  try {
    return f();
  } catch (const ValueError& e) {
    fail(e.what());
  } catch (const LayoutError& e) {
    fail(e.what());
  }
  throw std::logic_error("unreachable");
}

}  // namespace

MeasurementBasis two_outcome_basis(const Op& observable) {
  const auto parts = spectral_decomposition(observable);
  if (observable.dimension() != 2 || parts.size() != 2 || parts[0].eigenvalue != 1 || parts[1].eigenvalue != -1) {
    throw ValueError("partial measurement needs a qubit observable with eigenvalues +1 and -1");
  }
  const auto column = [&](const Op& p) {
    const auto& m = p.matrix();
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < m.cols(); ++c)
      if (m.col(c).norm() > m.col(best).norm()) best = c;
    return State(RegisterLayout::single("q", 2), m.col(best)).normalized();
  };
  return {column(parts[0].projector), column(parts[1].projector)};
}

void Resolver::fail(std::size_t column, const std::string& reason) const { throw ParseError(line_, column, reason); }

std::size_t Resolver::dimension_of(const std::string& system, std::size_t column) const {
  const auto it = dimensions_.find(system);
  if (it == dimensions_.end()) fail(column, "undeclared system '" + system + "'");
  return it->second;
}

std::size_t Resolver::covering(const std::string& system, std::size_t moment) const {
  for (std::size_t i = 0; i < chain_.strands.size(); ++i)
    if (strand_states_[i].system == system && chain_.strands[i].covers(TimeIndex{moment})) return i;
  return npos;
}

std::size_t Resolver::open_ending_at(const std::string& system, std::size_t moment) const {
  for (std::size_t i = 0; i < chain_.strands.size(); ++i) {
    if (strand_states_[i].system == system && chain_.strands[i].end() == TimeIndex{moment}) return i;
  }
  return npos;
}

std::size_t Resolver::post_target(const std::string& system, const std::optional<std::size_t>& moment,
                                  const Columns& columns) const {
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < chain_.strands.size(); ++i) {
    if (strand_states_[i].system != system) continue;
    if (moment && chain_.strands[i].end() != TimeIndex{*moment}) continue;
    candidates.push_back(i);
  }
  if (candidates.empty()) {
    fail(moment ? columns.moment : columns.system,
         moment ? "'" + system + "' has no strand ending at @" + std::to_string(*moment)
                : "'" + system + "' has not been prepared");
  }
  if (candidates.size() > 1) fail(columns.system, "'" + system + "' has several strands; name the final moment with @k");
  if (strand_states_[candidates.front()].post_selected) {
    fail(columns.system, "'" + system + "' is already post-selected at " + to_string(chain_.strands[candidates.front()].end()));
  }
  return candidates.front();
}

std::string Resolver::record_label(const std::string& system, std::size_t moment) {
  const std::string base = system + "@" + std::to_string(moment);
  const int n = ++label_uses_[base];
  return n == 1 ? base : base + "#" + std::to_string(n);
}

void Resolver::add(const Directive& directive, const Columns& columns) {
  line_ = directive.where.line;
  std::visit([&](const auto& d) { on(d, columns); }, directive.body);
}

MultiSystemChain Resolver::finish() && { return std::move(chain_); }

void Resolver::on(const SystemDecl& d, const Columns& c) {
  if (!is_identifier(d.name)) fail(c.system, "system name '" + d.name + "' is not an identifier");
  if (dimensions_.contains(d.name)) fail(c.system, "system '" + d.name + "' is already declared");
  if (d.dimension < 2) fail(c.value, "system dimension must be at least 2");
  dimensions_[d.name] = d.dimension;
}

void Resolver::on(const PrepareDecl& d, const Columns& c) {
  const std::size_t k = d.moment.value_or(0);
  std::vector<Register> regs;
  std::set<std::string> seen;
  for (const auto& sys : d.systems) {
    const std::size_t dim = dimension_of(sys, c.system);
    if (!seen.insert(sys).second) fail(c.system, "system '" + sys + "' listed twice");
    if (covering(sys, k) != npos) fail(c.moment, "moment @" + std::to_string(k) + " of '" + sys + "' is already defined");
    regs.push_back({strand_name(sys, k), dim});
  }
  const auto bad = [&](const std::string& why) { fail(c.value, why); };
  State state = checked([&] { return make_state(d.state, RegisterLayout(regs)); }, bad);
  for (std::size_t n = 0; n < regs.size(); ++n) {
    chain_.strands.push_back(Strand{regs[n].name, regs[n].dimension, TimeIndex{k}, {}});
    strand_states_.push_back({d.systems[n]});
  }
  chain_.preparations.push_back(std::move(state));
}

void Resolver::append_link(const std::string& system, std::size_t moment, std::size_t stride, const Columns& c,
                           const std::function<Link(const std::string&, TimeIndex, TimeIndex)>& make) {
  dimension_of(system, c.system);
  if (stride == 0) fail(c.option, "stride must be at least 1");
  const std::string into = "@" + std::to_string(moment);
  if (moment < stride) {
    fail(c.moment, "time-ordering violation: link into " + into + " with stride " + std::to_string(stride) +
                       " would start before @0");
  }
  if (covering(system, moment) != npos) {
    fail(c.moment, "time-ordering violation: moment " + into + " of '" + system + "' is already defined");
  }
  const std::size_t from = moment - stride;
  const std::size_t i = open_ending_at(system, from);
  if (i == npos) {
    fail(c.moment, "time-ordering violation: '" + system + "' has no chain ending at @" + std::to_string(from) +
                       " to link from");
  }
  if (strand_states_[i].post_selected) {
    fail(c.moment, "time-ordering violation: '" + system + "' is post-selected at @" + std::to_string(from));
  }
  const auto bad = [&](const std::string& why) { fail(c.value, why); };
  Link link = checked([&] { return make(strand(i).name, TimeIndex{from}, TimeIndex{moment}); }, bad);
  strand(i).links.push_back(std::move(link));
}

void Resolver::on(const LinkDecl& d, const Columns& c) {
  const std::size_t dim = dimension_of(d.system, c.system);
  append_link(d.system, d.moment, d.stride, c, [&](const std::string& reg, TimeIndex from, TimeIndex to) {
    return std::visit(
        [&](const auto& kind) -> Link {
          using T = std::decay_t<decltype(kind)>;
          if constexpr (std::is_same_v<T, IdentityKind>) {
            return Link::identity(from, to);
          } else if constexpr (std::is_same_v<T, UnitaryKind>) {
            return Link::unitary(make_unitary(kind.unitary, reg, dim), from, to);
          } else {
            const auto basis = two_outcome_basis(make_observable(kind.basis, reg, dim));
            return Link::partial(partial_kraus(basis, kind.alpha, kind.beta)[0].on(reg), from, to);
          }
        },
        d.kind);
  });
}

void Resolver::on(const CollapseDecl& d, const Columns& c) {
  const std::size_t dim = dimension_of(d.system, c.system);
  append_link(d.system, d.moment, 1, c, [&](const std::string& reg, TimeIndex from, TimeIndex to) {
    return Link::collapse(make_state(d.state, RegisterLayout::single(reg, dim)), from, to);
  });
}

void Resolver::on(const MeasureDecl& d, const Columns& c) {
  const std::size_t dim = dimension_of(d.system, c.system);
  const std::size_t i = covering(d.system, d.moment);
  if (i == npos) {
    fail(c.moment, "time-ordering violation: '" + d.system + "' has no moment @" + std::to_string(d.moment));
  }
  const auto bad = [&](const std::string& why) { fail(c.value, why); };
  Op obs = checked(
      [&] {
        Op op = make_observable(d.observable, strand(i).name, dim);
        spectral_decomposition(op);
        return op;
      },
      bad);
  chain_.events.emplace_back(MeasureEvent{TimeIndex{d.moment}, strand(i).name, std::move(obs), record_label(d.system, d.moment)});
}

void Resolver::on(const PartialDecl& d, const Columns& c) {
  const std::size_t dim = dimension_of(d.system, c.system);
  const std::size_t i = covering(d.system, d.moment);
  if (i == npos) {
    fail(c.moment, "time-ordering violation: '" + d.system + "' has no moment @" + std::to_string(d.moment));
  }
  const std::string& reg = strand(i).name;
  const auto bad = [&](const std::string& why) { fail(c.value, why); };
  const auto kraus = checked(
      [&] { return partial_kraus(two_outcome_basis(make_observable(d.basis, reg, dim)), d.alpha, d.beta); }, bad);
  chain_.events.emplace_back(KrausEvent{TimeIndex{d.moment},
                                        reg,
                                        {{+1.0, kraus[0].on(reg)}, {-1.0, kraus[1].on(reg)}},
                                        record_label(d.system, d.moment)});
}

void Resolver::on(const MeterDiffDecl& d, const Columns& c) {
  if (!is_identifier(d.label)) fail(c.value, "meter label '" + d.label + "' is not an identifier");
  for (const auto& p : chain_.pointers)
    if (p.name() == d.label) fail(c.value, "meter '" + d.label + "' is already declared");
  const std::size_t dim1 = dimension_of(d.first_system, c.system);
  const std::size_t dim2 = dimension_of(d.second_system, c.second_system);
  const std::size_t i1 = covering(d.first_system, d.first_moment);
  if (i1 == npos) {
    fail(c.moment, "time-ordering violation: '" + d.first_system + "' has no moment @" + std::to_string(d.first_moment));
  }
  const std::size_t i2 = covering(d.second_system, d.second_moment);
  if (i2 == npos) {
    fail(c.second_moment,
         "time-ordering violation: '" + d.second_system + "' has no moment @" + std::to_string(d.second_moment));
  }
  const bool same = d.first_system == d.second_system;
  if (same ? d.first_moment >= d.second_moment : d.first_moment > d.second_moment) {
    fail(c.second_moment, "time-ordering violation: difference meter needs its first moment before the second");
  }
  const auto bad = [&](const std::string& why) { fail(c.option, why); };
  Op first = checked([&] { return make_observable(d.observable, strand(i1).name, dim1); }, bad);
  Op second = checked([&] { return make_observable(d.observable, strand(i2).name, dim2); }, bad);
  const int radius = checked(
      [&] {
        try {
          return integer_spectral_radius(first);
        } catch (const ValueError&) {
          throw ValueError("meter observable needs an integer spectrum");
        }
      },
      bad);
  const std::size_t needed = PointerRegister::minimal_dimension(2 * radius);
  std::size_t dim = std::max(PointerRegister::kDefaultDimension, needed);
  if (d.dimension) {
    dim = *d.dimension;
    if (dim % 2 == 0 || dim < PointerRegister::kMinimumDimension) fail(c.option, "pointer dimension must be odd and at least 5");
    if (dim < needed) {
      fail(c.option, "pointer dimension " + std::to_string(dim) + " can wrap around; needs at least " +
                         std::to_string(needed));
    }
  }
  chain_.pointers.emplace_back(d.label, dim);
  chain_.events.emplace_back(CouplingEvent{TimeIndex{d.first_moment}, std::move(first), d.label, -1});
  chain_.events.emplace_back(CouplingEvent{TimeIndex{d.second_moment}, std::move(second), d.label, +1});
}

void Resolver::on(const PostselectDecl& d, const Columns& c) {
  std::vector<Register> regs;
  std::vector<std::size_t> targets;
  for (const auto& sys : d.systems) {
    const std::size_t dim = dimension_of(sys, c.system);
    const std::size_t i = post_target(sys, d.moment, c);
    if (std::find(targets.begin(), targets.end(), i) != targets.end()) fail(c.system, "system '" + sys + "' listed twice");
    targets.push_back(i);
    regs.push_back({strand(i).name, dim});
  }
  const auto bad = [&](const std::string& why) { fail(c.value, why); };
  State bra = checked([&] { return make_state(d.state, RegisterLayout(regs)); }, bad);
  for (std::size_t i : targets) strand_states_[i].post_selected = true;
  chain_.post_selections.push_back(std::move(bra));
}

void Resolver::on(const BellpostDecl& d, const Columns& c) {
  if (d.first == d.second) fail(c.system, "bell post-selection needs two different systems");
  on(PostselectDecl{{d.first, d.second}, d.moment, BellState{Bell::phi_plus}}, c);
}

}  // namespace moments::scenario::detail
