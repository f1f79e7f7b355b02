#include <atomic>
#include <stdexcept>
#include <string>

#include "bjgauss/kernels.hpp"

namespace bjgauss::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend best_backend() { return cpu_has_avx2() ? Backend::avx2 : Backend::scalar; }

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{best_backend()};
  return backend;
}

}  // namespace

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
  }
  return "unknown";
}

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar: return true;
    case Backend::avx2: return cpu_has_avx2();
  }
  return false;
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_available(b))
    throw std::invalid_argument("kernel backend '" + std::string(to_string(b)) +
                                "' is not available on this CPU");
  current().store(b, std::memory_order_relaxed);
}

void chebyshev_row(std::span<double> out, std::span<const double> next,
                   std::span<const double> cur, std::span<const double> prev, double alpha,
                   double beta) {
  if (active_backend() == Backend::avx2)
    avx2::chebyshev_row(out, next, cur, prev, alpha, beta);
  else
    scalar::chebyshev_row(out, next, cur, prev, alpha, beta);
}

void modified_row(std::span<double> out, std::span<const double> next,
                  std::span<const double> cur, std::span<const double> prev,
                  std::span<const double> lag, std::span<const double> a,
                  std::span<const double> b, double alpha, double beta) {
  if (active_backend() == Backend::avx2)
    avx2::modified_row(out, next, cur, prev, lag, a, b, alpha, beta);
  else
    scalar::modified_row(out, next, cur, prev, lag, a, b, alpha, beta);
}

double dot(std::span<const double> x, std::span<const double> y) {
  return active_backend() == Backend::avx2 ? avx2::dot(x, y) : scalar::dot(x, y);
}

}  // namespace bjgauss::kernels
