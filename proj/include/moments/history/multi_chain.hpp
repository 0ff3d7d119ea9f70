#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "moments/history/link.hpp"
#include "moments/meter/pointer.hpp"
#include "moments/outcome_stats.hpp"

namespace moments {

// One unbroken run of moments of a system, held in its own register. A
// system normally has one strand; a system whose moments are linked with
// stride > 1 (e.g. a "double life") has one strand per residue class.
struct Strand {
  std::string name;  // register name, unique in the chain
  std::size_t dimension = 2;
  TimeIndex start;
  std::vector<Link> links;  // contiguous: links[0].from == start, links[i].from == links[i-1].to

  TimeIndex end() const { return links.empty() ? start : links.back().to(); }
  bool covers(TimeIndex t) const;
};

// Projective measurement; branches over eigenvalues (descending).
struct MeasureEvent {
  TimeIndex at;
  std::string strand;
  Op observable;
  std::string label;
};

// Generalized measurement given by (recorded value, Kraus operator) pairs.
struct KrausEvent {
  TimeIndex at;
  std::string strand;
  std::vector<std::pair<double, Op>> branches;
  std::string label;
};

// CouplingEvent's observable names the strand register it acts on.
using ChainEvent = std::variant<MeasureEvent, KrausEvent, CouplingEvent>;

// Several strands with joint preparations at their first moments, events at
// moments, pointer registers read at the end, and final post-selections.
//
// Execution order: moments ascending; within a moment every strand's incoming
// link (strands in listed order), then the events at that moment in listed
// order. Post-selections and pointer readout come after the last moment.
struct MultiSystemChain {
  std::vector<Strand> strands;
  std::vector<State> preparations;  // each names one or more strand registers; each strand covered once
  std::vector<PointerRegister> pointers;
  std::vector<ChainEvent> events;
  std::vector<State> post_selections;  // bras over strand registers
  std::size_t dimension_cap = kDefaultDimensionCap;
};

// Outcome labels: recording events (measure / Kraus) in listed order, then pointers.
std::vector<std::string> outcome_labels(const MultiSystemChain& chain);

// Exact joint distribution of recorded outcomes and pointer readings,
// conditioned on every collapse / partial link and post-selection (ABL rule;
// sequential Born rule when nothing is post-selected). Outcomes whose
// normalized probability is below 1e-14 are omitted.
// Throws ConditioningImpossible when the conditioning has zero weight.
OutcomeStats exact_distribution(const MultiSystemChain& chain);

// Final joint state (post-selections applied, not renormalized) of a chain
// without branching events.
State evolve(const MultiSystemChain& chain);

// Forward sequential sampling with accept/reject on every conditioning step.
// Deterministic for a fixed seed.
OutcomeStats sample_distribution(const MultiSystemChain& chain, std::size_t samples, std::uint64_t seed);

// One accepted outcome sequence.
OutcomeKey sample_once(const MultiSystemChain& chain, std::uint64_t seed);

}  // namespace moments
