#pragma once

#include <stdexcept>
#include <string>

namespace sburgers {

/// Precondition violated by the caller (bad argument, mismatched grids, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Block or mode index outside the representable range.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A time integration produced a non-finite value or blew past the sentinel.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(double t, double norm, const std::string& what)
      : std::runtime_error(what), t_(t), norm_(norm) {}
  double time() const noexcept { return t_; }
  double norm() const noexcept { return norm_; }

 private:
  double t_;
  double norm_;
};

/// Fixed-point iteration failed to contract within the iteration budget.
class NonContractionError : public std::runtime_error {
 public:
  NonContractionError(double shift, int iterations, const std::string& what)
      : std::runtime_error(what), shift_(shift), iterations_(iterations) {}
  double shift() const noexcept { return shift_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double shift_;
  int iterations_;
};

/// Invalid configuration or command-line usage; carries the offending key.
class UsageError : public std::runtime_error {
 public:
  UsageError(std::string key, const std::string& what)
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace sburgers
