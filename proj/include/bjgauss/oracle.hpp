#pragma once

// Brute-force references for ∫_0^∞ f(x) x^α e^{-cx} J_ν(x) dx. Nothing here
// shares code with the moment recursions or the Gaussian rules; the oracle
// exists to certify them.

#include <cstddef>
#include <functional>

#include "bjgauss/moments.hpp"

namespace bjgauss {

struct OracleResult {
  double value = 0.0;
  double error_estimate = 0.0;  // panel error sum plus tail bound
  std::size_t panels = 0;
};

/// Caller-asserted envelope |f(x)| <= scale · x^power · e^{growth·x}, with
/// growth < c. Used only to place the truncation point.
struct IntegrandEnvelope {
  double scale = 1.0;
  double power = 0.0;
  double growth = 0.0;
};

/// Factor multiplying f(x) x^α e^{-cx}. `unit` drops the Bessel function,
/// giving the pure Laguerre weight.
enum class OracleKernel { bessel_j, unit };

/// Adaptive Gauss-Kronrod panel quadrature on [0, X] with panels aligned to
/// multiples of π. `tol` is an absolute target, floored at a few ulps of the
/// envelope mass so that huge integrands stay attainable. Throws
/// ConvergenceError (carrying the achieved estimate) when the panel budget
/// runs out.
OracleResult reference_integral(const WeightParams& params, const std::function<double(double)>& f,
                                double tol, const IntegrandEnvelope& envelope = {},
                                OracleKernel kernel = OracleKernel::bessel_j);

/// Closed form of ∫_0^∞ x^α e^{-dx} J_ν(x) dx through 2F1.
double exact_exponential_integral(double nu, double alpha, double d);

/// μ_k = ∫ x^k w(x) dx: numerical Bessel part plus the analytic Laguerre part
/// Γ(k+α+1)/c^{k+α+1}.
OracleResult moment_oracle(const WeightParams& params, std::size_t k, double tol = 1e-13);

}  // namespace bjgauss
