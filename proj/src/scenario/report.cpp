#include "moments/scenario/report.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>

#include "moments/errors.hpp"

namespace moments::scenario {

namespace {

double significant12(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", p);
  return std::strtod(buf, nullptr);
}

bool integral(double v) { return std::abs(v) < 9.0e15 && v == std::round(v); }

std::string value_text(double v) {
  if (integral(v)) return std::to_string(static_cast<long long>(v));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  throw ValueError("unknown report format '" + std::string(name) + "'");
}

std::string report_json(const OutcomeStats& stats) {
  // Hand-formatted so every number prints exactly as value_text renders it.
  const auto quoted = [](const std::string& text) { return nlohmann::json(text).dump(); };
  std::string out = "{\n  \"labels\": [";
  for (std::size_t i = 0; i < stats.labels.size(); ++i) out += (i ? ", " : "") + quoted(stats.labels[i]);
  out += "],\n  \"mode\": ";
  out += stats.is_exact() ? "\"exact\"" : "\"sampled\"";
  out += ",\n  \"outcomes\": [";
  std::size_t row = 0;
  for (const auto& [key, p] : stats.outcomes) {
    out += row++ ? ",\n" : "\n";
    out += "    {\"probability\": " + value_text(significant12(p)) + ", \"values\": [";
    for (std::size_t i = 0; i < key.size(); ++i) out += (i ? ", " : "") + value_text(key[i]);
    out += "]}";
  }
  out += row ? "\n  ],\n" : "],\n";
  const auto* sampled = std::get_if<SampledMode>(&stats.mode);
  out += "  \"samples\": " + (sampled ? std::to_string(sampled->samples) : std::string("null")) + ",\n";
  out += "  \"seed\": " + (sampled ? std::to_string(sampled->seed) : std::string("null")) + ",\n";
  out += "  \"success_probability\": " + value_text(significant12(stats.success_probability)) + "\n}\n";
  return out;
}

std::string report_csv(const OutcomeStats& stats) {
  std::string out;
  for (const auto& label : stats.labels) out += label + ",";
  out += "probability,mode,samples,seed,success_probability\n";
  const auto* sampled = std::get_if<SampledMode>(&stats.mode);
  const std::string tail = std::string(sampled ? "sampled," : "exact,") +
                           (sampled ? std::to_string(sampled->samples) + "," + std::to_string(sampled->seed) : ",") +
                           "," + value_text(significant12(stats.success_probability));
  for (const auto& [key, p] : stats.outcomes) {
    for (double v : key) out += value_text(v) + ",";
    out += value_text(significant12(p)) + "," + tail + "\n";
  }
  return out;
}

std::string report(const OutcomeStats& stats, ReportFormat format) {
  return format == ReportFormat::json ? report_json(stats) : report_csv(stats);
}

}  // namespace moments::scenario
