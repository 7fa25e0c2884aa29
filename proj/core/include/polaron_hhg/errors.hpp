#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace polaron {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionOverflowError : public Error {
 public:
  using Error::Error;
};

class InvalidStateError : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRangeError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

/// Iterative eigensolver gave up; carries the residual norms of the wanted pairs.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> residuals)
      : Error(what), residuals_(std::move(residuals)) {}

  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

class PropagationDivergedError : public Error {
 public:
  PropagationDivergedError(const std::string& what, double time, double norm)
      : Error(what), time_(time), norm_(norm) {}

  double time() const noexcept { return time_; }
  double norm() const noexcept { return norm_; }

 private:
  double time_;
  double norm_;
};

class HermiticityError : public Error {
 public:
  using Error::Error;
};

/// Configuration problem; `key()` names the offending entry (may be empty for syntax errors).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string key = {})
      : Error(what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace polaron
