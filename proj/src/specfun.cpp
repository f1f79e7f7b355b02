#include "bjgauss/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bjgauss {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      carry += (sum - t) + v;
    else
      carry += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

double bessel_j_series(double nu, double x) {
  const double half = 0.5 * x;
  double term = std::exp(nu * std::log(half) - log_gamma(nu + 1.0));
  const double q = half * half;
  double sum = term;
  for (int m = 1; m < 500; ++m) {
    term *= -q / (static_cast<double>(m) * (nu + m));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Hankel large-argument expansion. Returns nothing when the asymptotic
// terms stop decreasing before reaching working precision.
std::optional<double> bessel_j_asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;  // a_k(nu) / x^k
  double last = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    const double mag = std::abs(term);
    if (mag > last) break;
    last = mag;
    // P takes the even terms with alternating sign, Q the odd ones.
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      default: p += term; break;
    }
    if (mag < 1e-17 * std::max(std::abs(p), std::abs(q)) || term == 0.0) {
      converged = true;
      break;
    }
  }
  if (!converged) return std::nullopt;
  // cos(x - phi) expanded so the large argument is reduced by libm exactly.
  const double phi = (0.5 * nu + 0.25) * std::numbers::pi;
  const double cx = std::cos(x), sx = std::sin(x);
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double cos_chi = cx * cp + sx * sp;
  const double sin_chi = sx * cp - cx * sp;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_chi - q * sin_chi);
}

// Miller backward recurrence in the order, normalized with
// (x/2)^nu = Σ_j (nu+2j) Γ(nu+j)/j! J_{nu+2j}(x).
double bessel_j_miller(double nu, double x) {
  int top = static_cast<int>(x + 30.0 + 8.0 * std::cbrt(x));
  top += top % 2;
  const int half_top = top / 2;
  std::vector<double> coef(static_cast<std::size_t>(half_top) + 1);
  coef[0] = std::exp(log_gamma(nu + 1.0));
  double g = coef[0];  // Γ(nu+j)/j!, starting at j = 1 with Γ(nu+1)
  for (int j = 1; j <= half_top; ++j) {
    if (j > 1) g *= (nu + j - 1.0) / j;
    coef[static_cast<std::size_t>(j)] = (nu + 2.0 * j) * g;
  }

  double f_next = 0.0;
  double f = 1e-30;
  double norm = coef[static_cast<std::size_t>(half_top)] * f;
  for (int k = top; k >= 1; --k) {
    const double f_prev = 2.0 * (nu + k) / x * f - f_next;
    f_next = f;
    f = f_prev;
    if (((k - 1) & 1) == 0) norm += coef[static_cast<std::size_t>((k - 1) / 2)] * f;
    if (std::abs(f) > 1e250) {
      f *= 1e-250;
      f_next *= 1e-250;
      norm *= 1e-250;
    }
  }
  return f * std::exp(nu * std::log(0.5 * x)) / norm;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
  if (std::isinf(x)) return x;
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double gauss_2f1(double a, double b, double cc, double z) {
  if (!(std::abs(z) < 0.5))
    throw std::domain_error("gauss_2f1: |z| must be below 1/2 for the series");
  if (cc <= 0.0 && cc == std::floor(cc))
    throw std::domain_error("gauss_2f1: cc must not be a non-positive integer");

  double term = 1.0;
  double sum = 1.0;
  for (int m = 0; m < 500; ++m) {
    const double ratio = (a + m) * (b + m) / ((cc + m) * (m + 1.0)) * z;
    term *= ratio;
    sum += term;
    if (term == 0.0) return sum;
    if (std::abs(ratio) < 1.0 && std::abs(term) < 1e-16 * std::abs(sum)) return sum;
  }
  throw std::domain_error("gauss_2f1: series did not converge in 500 terms");
}

double bessel_j(double nu, double x) {
  if (!(nu >= 0.0) || !(x >= 0.0))
    throw std::domain_error("bessel_j: order and argument must be nonnegative");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (x <= 8.0) return bessel_j_series(nu, x);
  if (x >= std::max(25.0, nu * nu)) {
    if (auto v = bessel_j_asymptotic(nu, x)) return *v;
  }
  return bessel_j_miller(nu, x);
}

SignedLog SignedLog::from_double(double v) {
  if (v == 0.0) return {};
  return {v > 0.0 ? 1 : -1, std::log(std::abs(v))};
}

double SignedLog::to_double() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(logmag);
}

SignedLog operator/(SignedLog a, SignedLog b) {
  if (b.sign == 0) throw std::domain_error("SignedLog: division by zero");
  if (a.sign == 0) return {};
  return {a.sign * b.sign, a.logmag - b.logmag};
}

SignedLog signed_log_sum(std::span<const SignedLog> terms) {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms)
    if (t.sign != 0) top = std::max(top, t.logmag);
  if (std::isinf(top)) return {};

  CompensatedSum pos, neg;
  for (const auto& t : terms) {
    if (t.sign == 0) continue;
    const double scaled = std::exp(t.logmag - top);
    if (t.sign > 0)
      pos.add(scaled);
    else
      neg.add(scaled);
  }
  const double diff = pos.value() - neg.value();
  if (diff == 0.0) return {};
  return {diff > 0.0 ? 1 : -1, top + std::log(std::abs(diff))};
}

}  // namespace bjgauss
