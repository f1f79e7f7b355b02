#pragma once

// Data-parallel inner loops shared by the recurrence algorithms and the
// quadrature sums. Each kernel has a scalar reference implementation and an
// AVX2 variant; the variant is picked at runtime from the CPU features.
//
// The sweep kernels are elementwise with identical operation order in every
// variant, so their results are bitwise equal across backends. The dot
// product reassociates the sum and agrees only to rounding.

#include <span>
#include <string_view>

namespace bjgauss::kernels {

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend b);

bool backend_available(Backend b);

/// Backend used by the dispatching entry points below. Defaults to the best
/// available one.
Backend active_backend();

/// Throws std::invalid_argument if `b` is not available on this CPU.
void set_backend(Backend b);

/// out[i] = next[i] - alpha*cur[i] - beta*prev[i]
void chebyshev_row(std::span<double> out, std::span<const double> next,
                   std::span<const double> cur, std::span<const double> prev, double alpha,
                   double beta);

/// out[i] = next[i] - (alpha - a[i])*cur[i] - beta*prev[i] + b[i]*lag[i]
void modified_row(std::span<double> out, std::span<const double> next,
                  std::span<const double> cur, std::span<const double> prev,
                  std::span<const double> lag, std::span<const double> a,
                  std::span<const double> b, double alpha, double beta);

double dot(std::span<const double> x, std::span<const double> y);

namespace scalar {
void chebyshev_row(std::span<double> out, std::span<const double> next,
                   std::span<const double> cur, std::span<const double> prev, double alpha,
                   double beta);
void modified_row(std::span<double> out, std::span<const double> next,
                  std::span<const double> cur, std::span<const double> prev,
                  std::span<const double> lag, std::span<const double> a,
                  std::span<const double> b, double alpha, double beta);
double dot(std::span<const double> x, std::span<const double> y);
}  // namespace scalar

namespace avx2 {
void chebyshev_row(std::span<double> out, std::span<const double> next,
                   std::span<const double> cur, std::span<const double> prev, double alpha,
                   double beta);
void modified_row(std::span<double> out, std::span<const double> next,
                  std::span<const double> cur, std::span<const double> prev,
                  std::span<const double> lag, std::span<const double> a,
                  std::span<const double> b, double alpha, double beta);
double dot(std::span<const double> x, std::span<const double> y);
}  // namespace avx2

}  // namespace bjgauss::kernels
