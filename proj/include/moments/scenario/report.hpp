#pragma once

#include <string>
#include <string_view>

#include "moments/outcome_stats.hpp"

namespace moments::scenario {

enum class ReportFormat { json, csv };

ReportFormat parse_report_format(std::string_view name);

// JSON keys: labels, mode ("exact" | "sampled"), outcomes [{probability,
// values}], samples, seed (null when exact), success_probability.
// Probabilities carry 12 significant digits; integral outcome values print
// as integers.
std::string report_json(const OutcomeStats& stats);

// Header: <labels...>,probability,mode,samples,seed,success_probability;
// one row per outcome.
std::string report_csv(const OutcomeStats& stats);

std::string report(const OutcomeStats& stats, ReportFormat format);

}  // namespace moments::scenario
