#include "moments/core/layout.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "moments/errors.hpp"

namespace moments {

std::size_t checked_dimension(std::span<const std::size_t> dims, std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t d : dims) {
    if (d != 0 && total > std::numeric_limits<std::size_t>::max() / d) {
      throw DimensionCapExceeded(std::numeric_limits<std::size_t>::max(), cap);
    }
    total *= d;
    if (total > cap) throw DimensionCapExceeded(total, cap);
  }
  return total;
}

RegisterLayout::RegisterLayout(std::vector<Register> registers, std::size_t cap)
    : registers_(std::move(registers)) {
  std::set<std::string> seen;
  for (const auto& r : registers_) {
    if (r.name.empty()) throw LayoutError("register name must not be empty");
    if (r.dimension < 2) {
      throw LayoutError("register '" + r.name + "' needs dimension >= 2, got " + std::to_string(r.dimension));
    }
    if (!seen.insert(r.name).second) throw LayoutError("duplicate register name '" + r.name + "'");
  }
  const auto dims = dimensions();
  dimension_ = checked_dimension(dims, cap);
}

RegisterLayout RegisterLayout::single(std::string name, std::size_t dimension) {
  return RegisterLayout({Register{std::move(name), dimension}});
}

std::optional<std::size_t> RegisterLayout::find(const std::string& name) const {
  for (std::size_t i = 0; i < registers_.size(); ++i) {
    if (registers_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t RegisterLayout::index_of(const std::string& name) const {
  if (auto i = find(name)) return *i;
  throw LayoutError("unknown register '" + name + "'");
}

std::size_t RegisterLayout::stride(std::size_t i) const {
  std::size_t s = 1;
  for (std::size_t j = i + 1; j < registers_.size(); ++j) s *= registers_[j].dimension;
  return s;
}

std::vector<std::string> RegisterLayout::names() const {
  std::vector<std::string> out;
  out.reserve(registers_.size());
  for (const auto& r : registers_) out.push_back(r.name);
  return out;
}

std::vector<std::size_t> RegisterLayout::dimensions() const {
  std::vector<std::size_t> out;
  out.reserve(registers_.size());
  for (const auto& r : registers_) out.push_back(r.dimension);
  return out;
}

RegisterLayout RegisterLayout::concat(const RegisterLayout& other, std::size_t cap) const {
  std::vector<Register> regs = registers_;
  regs.insert(regs.end(), other.registers_.begin(), other.registers_.end());
  return RegisterLayout(std::move(regs), cap);
}

RegisterLayout RegisterLayout::without(std::span<const std::string> names) const {
  for (const auto& n : names) index_of(n);
  std::vector<Register> regs;
  for (const auto& r : registers_) {
    if (std::find(names.begin(), names.end(), r.name) == names.end()) regs.push_back(r);
  }
  return RegisterLayout(std::move(regs), std::numeric_limits<std::size_t>::max());
}

RegisterLayout RegisterLayout::renamed(std::span<const std::string> names) const {
  if (names.size() != registers_.size()) {
    throw LayoutError("rename needs " + std::to_string(registers_.size()) + " names, got " +
                      std::to_string(names.size()));
  }
  std::vector<Register> regs = registers_;
  for (std::size_t i = 0; i < regs.size(); ++i) regs[i].name = names[i];
  return RegisterLayout(std::move(regs), std::numeric_limits<std::size_t>::max());
}

RegisterLayout RegisterLayout::permuted(std::span<const std::size_t> order) const {
  if (order.size() != registers_.size()) throw LayoutError("permutation has wrong length");
  std::vector<bool> used(order.size(), false);
  std::vector<Register> regs;
  for (std::size_t i : order) {
    if (i >= order.size() || used[i]) throw LayoutError("invalid register permutation");
    used[i] = true;
    regs.push_back(registers_[i]);
  }
  return RegisterLayout(std::move(regs), std::numeric_limits<std::size_t>::max());
}

bool RegisterLayout::same_shape(const RegisterLayout& other) const {
  return dimensions() == other.dimensions();
}

}  // namespace moments
