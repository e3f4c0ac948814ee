#pragma once

#include <stdexcept>
#include <string>

namespace evrisk {

// Malformed or insufficient input data (CSV records, sample sizes).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: irrecoverable underflow, divergence, degenerate input.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Likelihood optimization did not converge.
class FitError : public NumericError {
 public:
  explicit FitError(const std::string& what) : NumericError(what) {}
};

}  // namespace evrisk
