#pragma once

#include <stdexcept>
#include <string>

namespace nhs {

/// Grid, coordinate or constant set violates its invariants.
class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nonphysical model state (non-monotone pressure or geopotential, ...).
class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operator precondition violated by the caller.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Requested configuration is outside what the model supports.
class UnsupportedFeature : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Implicit column solve failed; `column` is the worst offender.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int column) : std::runtime_error(what), column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

}  // namespace nhs
