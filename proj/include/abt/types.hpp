#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace abt {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Raised when a cutoff cannot represent the requested coherent amplitude.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& msg, int required)
      : Error(msg), required_cutoff(required) {}
  int required_cutoff;
};

// Out-of-contract argument values (singular phases, impossible outcomes, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace abt
