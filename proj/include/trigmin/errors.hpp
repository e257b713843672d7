#pragma once

#include <stdexcept>
#include <string>

namespace trigmin {

/// Bad run parameters (net too coarse, degree mismatch, empty input, ...).
class ParameterError : public std::invalid_argument {
public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// Coefficient model outside its admissible range.
class InvalidModel : public std::invalid_argument {
public:
  explicit InvalidModel(const std::string& what) : std::invalid_argument(what) {}
};

/// Zero derivative where a line direction is required.
class DegenerateSlope : public std::domain_error {
public:
  explicit DegenerateSlope(const std::string& what) : std::domain_error(what) {}
};

/// An iterative refinement did not converge.
class NumericFailure : public std::runtime_error {
public:
  explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace trigmin
