#pragma once

#include <stdexcept>
#include <string>

namespace vpv {

// Distribution or test parameter outside its admissible domain.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation (p not in (0,1),
// theta outside the null parameter space, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input data that makes a statistic undefined (zero variance, all ties).
class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace vpv
