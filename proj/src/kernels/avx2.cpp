#include <stdexcept>

#include "bjgauss/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define BJGAUSS_HAVE_AVX2_KERNELS 1
#endif

namespace bjgauss::kernels::avx2 {

#if BJGAUSS_HAVE_AVX2_KERNELS

// Operation order matches the scalar kernels term by term; no FMA, so the
// rows come out bitwise identical.

__attribute__((target("avx2"))) void chebyshev_row(std::span<double> out,
                                                   std::span<const double> next,
                                                   std::span<const double> cur,
                                                   std::span<const double> prev, double alpha,
                                                   double beta) {
  const std::size_t n = out.size();
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_sub_pd(_mm256_loadu_pd(&next[i]), _mm256_mul_pd(va, _mm256_loadu_pd(&cur[i])));
    t = _mm256_sub_pd(t, _mm256_mul_pd(vb, _mm256_loadu_pd(&prev[i])));
    _mm256_storeu_pd(&out[i], t);
  }
  for (; i < n; ++i) out[i] = next[i] - alpha * cur[i] - beta * prev[i];
}

__attribute__((target("avx2"))) void modified_row(std::span<double> out,
                                                  std::span<const double> next,
                                                  std::span<const double> cur,
                                                  std::span<const double> prev,
                                                  std::span<const double> lag,
                                                  std::span<const double> a,
                                                  std::span<const double> b, double alpha,
                                                  double beta) {
  const std::size_t n = out.size();
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d shift = _mm256_sub_pd(va, _mm256_loadu_pd(&a[i]));
    __m256d t = _mm256_sub_pd(_mm256_loadu_pd(&next[i]), _mm256_mul_pd(shift, _mm256_loadu_pd(&cur[i])));
    t = _mm256_sub_pd(t, _mm256_mul_pd(vb, _mm256_loadu_pd(&prev[i])));
    t = _mm256_add_pd(t, _mm256_mul_pd(_mm256_loadu_pd(&b[i]), _mm256_loadu_pd(&lag[i])));
    _mm256_storeu_pd(&out[i], t);
  }
  for (; i < n; ++i) out[i] = next[i] - (alpha - a[i]) * cur[i] - beta * prev[i] + b[i] * lag[i];
}

__attribute__((target("avx2"))) double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i])));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(&x[i + 4]), _mm256_loadu_pd(&y[i + 4])));
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i])));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

#else

void chebyshev_row(std::span<double>, std::span<const double>, std::span<const double>,
                   std::span<const double>, double, double) {
  throw std::logic_error("AVX2 kernels are not built for this target");
}
void modified_row(std::span<double>, std::span<const double>, std::span<const double>,
                  std::span<const double>, std::span<const double>, std::span<const double>,
                  std::span<const double>, double, double) {
  throw std::logic_error("AVX2 kernels are not built for this target");
}
double dot(std::span<const double>, std::span<const double>) {
  throw std::logic_error("AVX2 kernels are not built for this target");
}

#endif

}  // namespace bjgauss::kernels::avx2
