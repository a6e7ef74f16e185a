#pragma once

#include <stdexcept>
#include <string>

namespace sparsepc {

/// Invalid input or parameter (bad dimensions, out-of-domain values, malformed files).
class InvalidArgument : public std::runtime_error {
 public:
  explicit InvalidArgument(const std::string& what) : std::runtime_error(what) {}
};

/// A computation would exceed an explicit resource budget (e.g. support enumeration).
class ResourceLimit : public std::runtime_error {
 public:
  explicit ResourceLimit(const std::string& what) : std::runtime_error(what) {}
};

/// No parameter choice satisfies the requested constraints at this scale.
class Infeasible : public std::runtime_error {
 public:
  explicit Infeasible(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sparsepc
