#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "moments/history/link.hpp"
#include "moments/history/multi_chain.hpp"
#include "moments/outcome_stats.hpp"

namespace moments {

// Pre-selected ket at the earliest moment, ordered links, and an optional
// post-selected bra at the latest moment. The system is the (single
// register) layout of `pre`.
struct HistoryChain {
  State pre;
  std::vector<Link> links;
  std::optional<State> post;
  TimeIndex start{0};

  const RegisterLayout& system() const { return pre.layout(); }
  TimeIndex end() const { return links.empty() ? start : links.back().to(); }
  bool covers(TimeIndex t) const;

  // Throws on non-contiguous links, unnormalized boundaries, or a system that
  // is not a single register.
  void validate() const;
};

// Builds a chain of `steps` identity links with stride 1 starting at moment 0.
HistoryChain identity_chain(State pre, std::size_t steps, std::optional<State> post = std::nullopt);

// <post| L_n ... L_1 |pre>. Throws ValueError without a post boundary.
std::complex<double> contract(const HistoryChain& chain);

// |contract|^2 with a post boundary; without one, the post boundary is summed
// over a complete basis, giving ||L_n ... L_1 |pre>||^2.
double history_probability(const HistoryChain& chain);

struct MeasurementSlot {
  TimeIndex at;
  Op observable;
};

// Strand/event form of a single chain plus projective measurements at the
// given moments; labels are "@k" ("@k#2", ... for repeats).
MultiSystemChain as_multi_system(const HistoryChain& chain, std::span<const MeasurementSlot> slots = {});

// Joint distribution of eigenvalue outcomes conditioned on both boundaries.
OutcomeStats conditional_outcome_distribution(const HistoryChain& chain, std::span<const MeasurementSlot> slots);

// One outcome sequence (forward sampling, accept/reject on the post boundary).
OutcomeKey sample_history(const HistoryChain& chain, std::span<const MeasurementSlot> slots, std::uint64_t seed);

OutcomeStats sample_history_distribution(const HistoryChain& chain, std::span<const MeasurementSlot> slots,
                                         std::size_t samples, std::uint64_t seed);

// |phi><phi| = c1 U1 + c2 U2 with U1 = I, U2 = 2|phi><phi| - I, c1 = c2 = 1/2.
struct CollapseDecomposition {
  std::array<double, 2> weights;
  std::array<Op, 2> unitaries;
};

CollapseDecomposition decompose_collapse(const Link& collapse);

}  // namespace moments
