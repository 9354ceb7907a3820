#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace dce {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr Complex kI{0.0, 1.0};

/// Thrown when an iterative scheme fails to reach its tolerance
/// (series summation, adaptive step-size underflow, truncation escalation).
class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

/// Integer power, exact for the small exponents used throughout.
inline double powi(double x, int n) {
  if (n < 0) return 1.0 / powi(x, -n);
  double r = 1.0, b = x;
  while (n) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

inline Complex powi(Complex x, int n) {
  if (n < 0) return 1.0 / powi(x, -n);
  Complex r = 1.0, b = x;
  while (n) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

inline bool near_integer(double x, double tol = 1e-13) {
  return std::abs(x - std::round(x)) < tol;
}

}  // namespace dce
