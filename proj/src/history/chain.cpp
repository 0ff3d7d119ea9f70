#include "moments/history/chain.hpp"

#include <algorithm>
#include <map>

namespace moments {

bool HistoryChain::covers(TimeIndex t) const {
  if (t == start) return true;
  return std::any_of(links.begin(), links.end(), [&](const Link& l) { return l.to() == t; });
}

void HistoryChain::validate() const {
  if (system().size() != 1) throw LayoutError("history chain system must be a single register");
  if (!pre.is_normalized(1e-10)) throw ValueError("pre-selected state must be normalized");
  if (post) {
    if (!post->layout().same_shape(system())) throw LayoutError("post-selected state does not match the system");
    if (!post->is_normalized(1e-10)) throw ValueError("post-selected state must be normalized");
  }
  TimeIndex cursor = start;
  for (const auto& link : links) {
    if (link.from() != cursor) {
      throw ValueError("link " + to_string(link.from()) + " -> " + to_string(link.to()) + " does not continue from " +
                       to_string(cursor));
    }
    cursor = link.to();
  }
}

HistoryChain identity_chain(State pre, std::size_t steps, std::optional<State> post) {
  HistoryChain chain{std::move(pre), {}, std::move(post), TimeIndex{0}};
  for (std::size_t k = 0; k < steps; ++k) chain.links.push_back(Link::identity(TimeIndex{k}, TimeIndex{k + 1}));
  return chain;
}

namespace {

State propagate(const HistoryChain& chain) {
  chain.validate();
  State psi = chain.pre;
  for (const auto& link : chain.links) psi = apply(link_matrix(link, chain.system()), psi);
  return psi;
}

}  // namespace

std::complex<double> contract(const HistoryChain& chain) {
  if (!chain.post) throw ValueError("contract: chain has no post-selected boundary");
  return inner(*chain.post, propagate(chain));
}

double history_probability(const HistoryChain& chain) {
  if (chain.post) return std::norm(contract(chain));
  return propagate(chain).squared_norm();
}

MultiSystemChain as_multi_system(const HistoryChain& chain, std::span<const MeasurementSlot> slots) {
  chain.validate();
  const std::string name = chain.system()[0].name;
  MultiSystemChain multi;
  multi.strands.push_back(Strand{name, chain.system()[0].dimension, chain.start, chain.links});
  multi.preparations.push_back(chain.pre);
  if (chain.post) multi.post_selections.push_back(chain.post->on(name));

  std::map<std::size_t, int> seen;
  for (const auto& slot : slots) {
    std::string label = to_string(slot.at);
    if (const int n = ++seen[slot.at.k]; n > 1) label += "#" + std::to_string(n);
    multi.events.emplace_back(MeasureEvent{slot.at, name, slot.observable, std::move(label)});
  }
  return multi;
}

OutcomeStats conditional_outcome_distribution(const HistoryChain& chain, std::span<const MeasurementSlot> slots) {
  return exact_distribution(as_multi_system(chain, slots));
}

OutcomeKey sample_history(const HistoryChain& chain, std::span<const MeasurementSlot> slots, std::uint64_t seed) {
  return sample_once(as_multi_system(chain, slots), seed);
}

OutcomeStats sample_history_distribution(const HistoryChain& chain, std::span<const MeasurementSlot> slots,
                                         std::size_t samples, std::uint64_t seed) {
  return sample_distribution(as_multi_system(chain, slots), samples, seed);
}

CollapseDecomposition decompose_collapse(const Link& collapse) {
  const auto* c = std::get_if<Link::Collapse>(&collapse.payload());
  if (!c) throw ValueError("decompose_collapse needs a collapse link");
  if (c->phi.dimension() != 2) throw ValueError("decompose_collapse needs a two-dimensional system");
  const Op projector = Op::outer(c->phi, c->phi);
  const Op id = Op::identity(projector.layout());
  const Op reflection = 2.0 * projector - id;
  return {{0.5, 0.5}, {id, reflection}};
}

}  // namespace moments
