#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace moments {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Register name collisions, unknown registers, mismatched layouts.
class LayoutError : public Error {
 public:
  using Error::Error;
};

// A precondition on a value (normalization, unitarity, projector, ...) failed.
class ValueError : public Error {
 public:
  using Error::Error;
};

class DimensionCapExceeded : public Error {
 public:
  DimensionCapExceeded(std::size_t requested, std::size_t cap)
      : Error("total dimension " + std::to_string(requested) + " exceeds cap " + std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}

  std::size_t requested() const { return requested_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t requested_;
  std::size_t cap_;
};

// Pre/post boundaries (or collapse links) leave no weight to condition on.
class ConditioningImpossible : public Error {
 public:
  using Error::Error;
};

// A pointer coupling would shift past the edge of a cyclic meter register.
class PointerWraparound : public Error {
 public:
  PointerWraparound(const std::string& pointer, std::size_t dimension, std::size_t required)
      : Error("pointer '" + pointer + "' of dimension " + std::to_string(dimension) +
              " would wrap around; minimal safe dimension is " + std::to_string(required)),
        required_(required) {}

  std::size_t required_dimension() const { return required_; }

 private:
  std::size_t required_;
};

}  // namespace moments
