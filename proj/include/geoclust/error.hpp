#pragma once

#include <stdexcept>
#include <string>

namespace geoclust {

// Malformed or out-of-contract input (bad shapes, ranges, files). CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Input is well-formed but numerically degenerate (zero total inertia,
// zero baseline, all-zero matrix). CLI exit code 3.
class DegenerateError : public std::runtime_error {
 public:
  explicit DegenerateError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace geoclust
