#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "moments/history/multi_chain.hpp"
#include "moments/scenario/scenario.hpp"

namespace moments::scenario::detail {

// Columns of the tokens a semantic error may point at; default to the
// directive's own column when the source text is not at hand.
struct Columns {
  std::size_t system = 0;
  std::size_t moment = 0;
  std::size_t value = 0;
  std::size_t second_system = 0;
  std::size_t second_moment = 0;
  std::size_t option = 0;

  static Columns at(std::size_t column) { return {column, column, column, column, column, column}; }
};

// Checks directives in order and assembles the chain.
class Resolver {
 public:
  explicit Resolver(std::size_t dimension_cap = kDefaultDimensionCap) { chain_.dimension_cap = dimension_cap; }

  void add(const Directive& directive, const Columns& columns);
  MultiSystemChain finish() &&;

 private:
  struct StrandState {
    std::string system;
    bool post_selected = false;
  };

  [[noreturn]] void fail(std::size_t column, const std::string& reason) const;
  std::size_t dimension_of(const std::string& system, std::size_t column) const;
  Strand& strand(std::size_t index) { return chain_.strands[index]; }
  std::size_t covering(const std::string& system, std::size_t moment) const;
  std::size_t open_ending_at(const std::string& system, std::size_t moment) const;
  std::size_t post_target(const std::string& system, const std::optional<std::size_t>& moment,
                          const Columns& columns) const;
  std::string record_label(const std::string& system, std::size_t moment);
  void append_link(const std::string& system, std::size_t moment, std::size_t stride, const Columns& columns,
                   const std::function<Link(const std::string&, TimeIndex, TimeIndex)>& make);

  void on(const SystemDecl& d, const Columns& c);
  void on(const PrepareDecl& d, const Columns& c);
  void on(const LinkDecl& d, const Columns& c);
  void on(const CollapseDecl& d, const Columns& c);
  void on(const MeasureDecl& d, const Columns& c);
  void on(const PartialDecl& d, const Columns& c);
  void on(const MeterDiffDecl& d, const Columns& c);
  void on(const PostselectDecl& d, const Columns& c);
  void on(const BellpostDecl& d, const Columns& c);

  MultiSystemChain chain_;
  std::vector<StrandState> strand_states_;
  std::map<std::string, std::size_t> dimensions_;
  std::map<std::string, int> label_uses_;
  std::size_t line_ = 0;
};

// +1 / -1 eigenvectors of a two-outcome observable.
MeasurementBasis two_outcome_basis(const Op& observable);

}  // namespace moments::scenario::detail
