#pragma once

// Special functions used by the moment recursions, the oracle and the EM
// kernels. Everything here is pure and reentrant.

#include <span>

namespace bjgauss {

/// ln Γ(x) for x > 0.
double log_gamma(double x);

/// Gauss hypergeometric series 2F1(a, b; cc; z), restricted to |z| < 1/2 so
/// the series converges geometrically.
double gauss_2f1(double a, double b, double cc, double z);

/// Bessel function of the first kind J_nu(x) for nu >= 0, x >= 0.
double bessel_j(double nu, double x);

/// Sign and natural-log magnitude of a real number. Used to carry
/// factorial-sized factors without overflow.
struct SignedLog {
  int sign = 0;        // -1, 0 or +1
  double logmag = 0.0; // ignored when sign == 0

  static SignedLog from_double(double v);
  static SignedLog from_log(int sign, double logmag) { return SignedLog{sign, logmag}; }

  double to_double() const;
  bool is_zero() const { return sign == 0; }

  friend SignedLog operator*(SignedLog a, SignedLog b) {
    if (a.sign == 0 || b.sign == 0) return {};
    return {a.sign * b.sign, a.logmag + b.logmag};
  }
  friend SignedLog operator/(SignedLog a, SignedLog b);
};

/// Σ sign_i·exp(logmag_i). The largest magnitude is factored out and the
/// positive and negative parts are accumulated separately.
SignedLog signed_log_sum(std::span<const SignedLog> terms);

}  // namespace bjgauss
