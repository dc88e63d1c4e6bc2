#pragma once

#include <stdexcept>
#include <string>

namespace dipolatt {

// Invalid quantum numbers, out-of-range arguments.
class DomainError : public std::invalid_argument {
public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed caller input (non-orthogonal basis, empty grid, ...).
class InputError : public std::invalid_argument {
public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Quadrature non-convergence and other numerical failures.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Physical-regime violations (saturation too large, pulse not sudden, ...).
class RegimeError : public std::runtime_error {
public:
  explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

// Non-integrable combination of radial potential and moment order.
class IntegrabilityError : public std::runtime_error {
public:
  explicit IntegrabilityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dipolatt
