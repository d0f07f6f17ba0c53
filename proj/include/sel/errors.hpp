#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sel {

/// Model constant outside its admissible range (e.g. gamma <= 1).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a pointwise function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested a derivative at a state with rho <= rho_floor.
class VacuumError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NumericalBlowup : public std::runtime_error {
 public:
  NumericalBlowup(const std::string& what, long cell, long interval = -1)
      : std::runtime_error(what), cell_(cell), interval_(interval) {}

  long cell() const { return cell_; }
  /// Splitting window in which the failure happened, -1 if unknown.
  long interval() const { return interval_; }

 private:
  long cell_;
  long interval_;
};

class PathExhausted : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Series or trajectories that should share record times or grids do not.
class AlignmentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::vector<std::string> keys)
      : std::runtime_error(what), keys_(std::move(keys)) {}

  const std::vector<std::string>& keys() const { return keys_; }

 private:
  std::vector<std::string> keys_;
};

}  // namespace sel
