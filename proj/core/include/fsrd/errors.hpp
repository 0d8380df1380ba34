#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fsrd {

// Base type for all toolkit errors so callers can catch one family.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid user-supplied value (grid sizes, exponents, tolerances, ...).
class InvalidArgument : public Error {
public:
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

// A state or evaluation stopped being finite. `step` is the time-step index
// at which the problem was detected, or npos for non-time-stepped contexts.
class NonFiniteError : public Error {
public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  NonFiniteError(const std::string& what, std::size_t step_index = npos)
      : Error(step_index == npos
                  ? what
                  : what + " (step " + std::to_string(step_index) + ")"),
        step(step_index) {}

  std::size_t step;
};

// Config file problems carry the offending line when known.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what, int line_number = 0)
      : Error(line_number > 0 ? what + " (line " + std::to_string(line_number) + ")"
                              : what),
        line(line_number) {}

  int line;
};

} // namespace fsrd
