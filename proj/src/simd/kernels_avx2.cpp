#include "wdn/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define WDN_HAS_X86 1
#include <immintrin.h>
#else
#define WDN_HAS_X86 0
#endif

namespace wdn::simd::avx2 {

#if WDN_HAS_X86

#define WDN_AVX2 __attribute__((target("avx2,fma")))

bool compiled() { return true; }

namespace {

WDN_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

WDN_AVX2 double dot_impl(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

}  // namespace

WDN_AVX2 void gemv_bias(std::span<const double> a, std::span<const double> x,
                        std::span<const double> b, std::span<double> y) {
  const std::size_t cols = x.size();
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = dot_impl(a.data() + i * cols, x.data(), cols) + b[i];
}

WDN_AVX2 void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const std::size_t n = y.size();
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y.data() + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x.data() + i), vy);
    _mm256_storeu_pd(y.data() + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

WDN_AVX2 void offset(std::span<const double> base, double alpha,
                     std::span<const double> dir, std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_fmadd_pd(va, _mm256_loadu_pd(dir.data() + i),
                                _mm256_loadu_pd(base.data() + i));
    _mm256_storeu_pd(out.data() + i, v);
  }
  for (; i < n; ++i) out[i] = base[i] + alpha * dir[i];
}

WDN_AVX2 double dot(std::span<const double> x, std::span<const double> y) {
  return dot_impl(x.data(), y.data(), x.size());
}

#else

bool compiled() { return false; }
void gemv_bias(std::span<const double> a, std::span<const double> x,
               std::span<const double> b, std::span<double> y) {
  scalar::gemv_bias(a, x, b, y);
}
void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  scalar::axpy(alpha, x, y);
}
void offset(std::span<const double> base, double alpha,
            std::span<const double> dir, std::span<double> out) {
  scalar::offset(base, alpha, dir, out);
}
double dot(std::span<const double> x, std::span<const double> y) {
  return scalar::dot(x, y);
}

#endif

}  // namespace wdn::simd::avx2
