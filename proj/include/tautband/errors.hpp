#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tautband {

// Bad user input: malformed data, out-of-domain parameters. CLI exit code 1.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A tube (or band) with an empty feasible set at some knot.
class InfeasibleError : public InputError {
 public:
  InfeasibleError(std::size_t knot, const std::string& what)
      : InputError("infeasible at knot " + std::to_string(knot) + ": " + what), knot_(knot) {}

  std::size_t knot() const noexcept { return knot_; }

 private:
  std::size_t knot_;
};

// A broken internal invariant. Signals a bug rather than bad input. CLI exit code 2.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tautband
