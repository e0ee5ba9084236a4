#pragma once

#include <stdexcept>
#include <string>

namespace ptens {

/// Bad input: malformed domain, violated precondition, parameter out of range.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A formula was requested in a regime it does not cover.
class NotCovered : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative or refinement procedure failed to settle.
///
/// `last` and `previous` carry the two most recent estimates (or the last
/// iterate and its residual, depending on the thrower) for diagnostics.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double last, double previous)
      : std::runtime_error(what), last_(last), previous_(previous) {}

  double last() const noexcept { return last_; }
  double previous() const noexcept { return previous_; }

 private:
  double last_;
  double previous_;
};

}  // namespace ptens
