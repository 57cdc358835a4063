#pragma once

#include <stdexcept>
#include <string>

namespace netd {

// Malformed input: bad ids, negative costs, payload/instance mismatch.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Valid input routed to a component that cannot handle it
// (wrong oracle for the problem family, missing weights, bad flag combos).
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Instance exceeds a hard size cap of an exponential-time component.
struct capacity_error : std::runtime_error {
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// A request that no element set can satisfy.
struct infeasible_error : std::runtime_error {
  explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

// Broken internal invariant; always a bug, never a user error.
struct internal_error : std::logic_error {
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace netd
