#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace moments {

// One recorded value per label, in label order.
using OutcomeKey = std::vector<double>;

struct ExactMode {
  bool operator==(const ExactMode&) const = default;
};

struct SampledMode {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  bool operator==(const SampledMode&) const = default;
};

using StatsMode = std::variant<ExactMode, SampledMode>;

// Joint distribution of labeled outcomes. `success_probability` is the weight
// of whatever conditioning (post-selection, collapse links) was imposed.
struct OutcomeStats {
  std::vector<std::string> labels;
  std::map<OutcomeKey, double> outcomes;
  StatsMode mode = ExactMode{};
  double success_probability = 1.0;

  bool is_exact() const { return std::holds_alternative<ExactMode>(mode); }
  double probability(const OutcomeKey& key) const;
  double total() const;

  std::size_t label_index(const std::string& label) const;
  // Distribution of one label's values.
  std::map<double, double> marginal(std::size_t label) const;
  double mean(std::size_t label) const;
  double variance(std::size_t label) const;
};

// Half the L1 distance over the union of outcome keys. Labels must agree.
double total_variation(const OutcomeStats& a, const OutcomeStats& b);

}  // namespace moments
