#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gspec {

/// Bad input: out-of-range parameters, malformed specs, violated preconditions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The QL iteration did not converge for the eigenvalue at `row()`.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(std::size_t row, const std::string& what)
      : std::runtime_error(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// A hard (non-statistical) invariant failed at run time.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {
inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}
}  // namespace detail

}  // namespace gspec
