#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace randcrit {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode {
  InvalidDegree,
  Overflow,
  NonFiniteInput,
  DegenerateConditioning,
  NumericalInconsistency,
  QuadratureFailure,
  ZeroPolynomial,
  DomainError,
  ContractViolation,
  Unsupported,
  TooFewRecords,
  InvalidConfig,
  Io,
};

const char* error_code_name(ErrorCode code);

// All library failures surface as this exception; `code` is stable and is
// what the CLI reports in its error JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline bool is_finite(cplx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace randcrit

namespace randcrit {

// Integer power by repeated squaring; std::pow(complex, int) goes through
// exp/log and loses accuracy near the origin.
template <typename T>
T ipow(T base, int exponent) {
  T result(1.0);
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

}  // namespace randcrit
