#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace wemin {

// Universal numeric currency of the library. NaN/infinity is treated as an
// error value at every API boundary, never silently propagated.
using Complex = std::complex<double>;

// Half-plane points at or below this imaginary part are rejected; the
// boundary is singular for the integrands this library cares about.
inline constexpr double kBoundaryImMin = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluation failures: branch cut hit, division by zero, non-finite result.
class EvalError : public Error {
 public:
  using Error::Error;
};

inline bool is_finite(Complex v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

inline void require_finite(Complex v, const char* what) {
  if (!is_finite(v)) {
    throw EvalError(std::string(what) + ": non-finite value");
  }
}

// Round-trip decimal formatting used by every serializer in the project.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace wemin
