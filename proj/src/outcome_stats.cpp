#include "moments/outcome_stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "moments/errors.hpp"

namespace moments {

double OutcomeStats::probability(const OutcomeKey& key) const {
  auto it = outcomes.find(key);
  return it == outcomes.end() ? 0.0 : it->second;
}

double OutcomeStats::total() const {
  double s = 0;
  for (const auto& [k, p] : outcomes) s += p;
  return s;
}

std::size_t OutcomeStats::label_index(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw ValueError("no outcome label '" + label + "'");
  return static_cast<std::size_t>(it - labels.begin());
}

std::map<double, double> OutcomeStats::marginal(std::size_t label) const {
  if (label >= labels.size()) throw ValueError("outcome label index out of range");
  std::map<double, double> out;
  for (const auto& [k, p] : outcomes) out[k[label]] += p;
  return out;
}

double OutcomeStats::mean(std::size_t label) const {
  double m = 0;
  for (const auto& [v, p] : marginal(label)) m += v * p;
  return m;
}

double OutcomeStats::variance(std::size_t label) const {
  const double m = mean(label);
  double var = 0;
  for (const auto& [v, p] : marginal(label)) var += (v - m) * (v - m) * p;
  return var;
}

double total_variation(const OutcomeStats& a, const OutcomeStats& b) {
  if (a.labels.size() != b.labels.size()) throw ValueError("total_variation: label count differs");
  std::set<OutcomeKey> keys;
  for (const auto& [k, p] : a.outcomes) keys.insert(k);
  for (const auto& [k, p] : b.outcomes) keys.insert(k);
  double sum = 0;
  for (const auto& k : keys) sum += std::abs(a.probability(k) - b.probability(k));
  return 0.5 * sum;
}

}  // namespace moments
