#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace moments {

inline constexpr std::size_t kDefaultDimensionCap = std::size_t{1} << 20;

struct Tolerances {
  double structural = 1e-10;  // unitary / hermitian / projector checks
  double norm = 1e-12;        // normalization of physical states
};

struct Register {
  std::string name;
  std::size_t dimension = 2;

  bool operator==(const Register&) const = default;
};

// Ordered list of named registers. Register 0 is the slowest-varying tensor
// factor: the flat index of digits (i_0, ..., i_{n-1}) is
// i_0 * d_1 * ... * d_{n-1} + ... + i_{n-1}.
class RegisterLayout {
 public:
  RegisterLayout() = default;
  explicit RegisterLayout(std::vector<Register> registers, std::size_t cap = kDefaultDimensionCap);

  static RegisterLayout single(std::string name, std::size_t dimension);

  std::size_t size() const { return registers_.size(); }
  bool empty() const { return registers_.empty(); }
  std::size_t dimension() const { return dimension_; }

  const Register& operator[](std::size_t i) const { return registers_[i]; }
  auto begin() const { return registers_.begin(); }
  auto end() const { return registers_.end(); }
  std::span<const Register> registers() const { return registers_; }

  std::optional<std::size_t> find(const std::string& name) const;
  // Throws LayoutError when the register is absent.
  std::size_t index_of(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name).has_value(); }

  // Distance in flat index between consecutive values of register i.
  std::size_t stride(std::size_t i) const;

  std::vector<std::string> names() const;
  std::vector<std::size_t> dimensions() const;

  // Concatenation; register names must stay unique.
  RegisterLayout concat(const RegisterLayout& other, std::size_t cap = kDefaultDimensionCap) const;
  RegisterLayout without(std::span<const std::string> names) const;
  RegisterLayout renamed(std::span<const std::string> names) const;
  RegisterLayout permuted(std::span<const std::size_t> order) const;

  bool operator==(const RegisterLayout& other) const { return registers_ == other.registers_; }

  // Same dimensions in the same order; names ignored.
  bool same_shape(const RegisterLayout& other) const;

 private:
  std::vector<Register> registers_;
  std::size_t dimension_ = 1;
};

// Product of dimensions with overflow and cap checks; throws DimensionCapExceeded.
std::size_t checked_dimension(std::span<const std::size_t> dims, std::size_t cap = kDefaultDimensionCap);

}  // namespace moments
