#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mvge {

// Bad input: malformed files, inconsistent shapes, out-of-range options.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A loss or parameter became non-finite.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::ptrdiff_t epoch = -1)
      : std::runtime_error(what), epoch_(epoch) {}
  std::ptrdiff_t epoch() const noexcept { return epoch_; }

 private:
  std::ptrdiff_t epoch_;
};

}  // namespace mvge
