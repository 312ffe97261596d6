#pragma once

#include <cmath>
#include <limits>

namespace jchain {

/// Real number stored as sign and natural log of its magnitude.
/// `logmag` is meaningless when `sign == 0`.
struct SignedLog {
  int sign = 0;
  double logmag = 0.0;

  static SignedLog zero() { return {0, 0.0}; }
  static SignedLog one() { return {1, 0.0}; }

  static SignedLog from_double(double x) {
    if (x == 0.0) return zero();
    return {x > 0 ? 1 : -1, std::log(std::fabs(x))};
  }

  double to_double() const { return sign == 0 ? 0.0 : sign * std::exp(logmag); }

  bool is_zero() const { return sign == 0; }

  SignedLog& operator*=(const SignedLog& o) {
    sign *= o.sign;
    logmag += o.logmag;
    return *this;
  }

  SignedLog& operator/=(const SignedLog& o) {
    sign *= o.sign;  // division by zero keeps sign 0; callers guard
    logmag -= o.logmag;
    return *this;
  }

  /// |x|^e carrying the sign through; only meaningful for positive values or integer e.
  SignedLog pow(double e) const { return {sign, logmag * e}; }

  SignedLog inverse() const { return {sign, -logmag}; }
};

inline SignedLog operator*(SignedLog a, const SignedLog& b) { return a *= b; }
inline SignedLog operator/(SignedLog a, const SignedLog& b) { return a /= b; }

}  // namespace jchain
