#include "bjgauss/kernels.hpp"

namespace bjgauss::kernels::scalar {

void chebyshev_row(std::span<double> out, std::span<const double> next,
                   std::span<const double> cur, std::span<const double> prev, double alpha,
                   double beta) {
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = next[i] - alpha * cur[i] - beta * prev[i];
}

void modified_row(std::span<double> out, std::span<const double> next,
                  std::span<const double> cur, std::span<const double> prev,
                  std::span<const double> lag, std::span<const double> a,
                  std::span<const double> b, double alpha, double beta) {
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = next[i] - (alpha - a[i]) * cur[i] - beta * prev[i] + b[i] * lag[i];
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

}  // namespace bjgauss::kernels::scalar
