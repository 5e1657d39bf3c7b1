#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "spectral_lift/simd/kernels.hpp"

namespace spectral_lift::simd::avx2 {

namespace {

// Interleaved complex layout: [re0, im0, re1, im1] per 256-bit register.
inline double horizontal_max(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d m = _mm_max_pd(lo, hi);
  m = _mm_max_sd(m, _mm_unpackhi_pd(m, m));
  return _mm_cvtsd_f64(m);
}

// |z|^2 for two interleaved complex numbers, duplicated into both lanes of a pair.
inline __m256d modulus_squared(__m256d v) {
  const __m256d sq = _mm256_mul_pd(v, v);
  return _mm256_add_pd(sq, _mm256_permute_pd(sq, 0b0101));
}

}  // namespace

void caxpy(std::span<Complex> y, Complex a, std::span<const Complex> x) {
  const std::size_t n = y.size();
  auto* yp = reinterpret_cast<double*>(y.data());
  const auto* xp = reinterpret_cast<const double*>(x.data());
  const __m256d ar = _mm256_set1_pd(a.real());
  // (xr, xi) * a = (ar xr - ai xi, ar xi + ai xr); the swapped product carries
  // (-ai xi, +ai xr) so a single add reproduces the scalar operation order.
  const __m256d ai_signed = _mm256_set_pd(a.imag(), -a.imag(), a.imag(), -a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    const __m256d xs = _mm256_permute_pd(xv, 0b0101);
    const __m256d prod = _mm256_add_pd(_mm256_mul_pd(ar, xv), _mm256_mul_pd(ai_signed, xs));
    const __m256d yv = _mm256_loadu_pd(yp + 2 * i);
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(yv, prod));
  }
  if (i < n) scalar::caxpy(y.subspan(i), a, x.subspan(i));
}

void axpy(std::span<double> y, double a, std::span<const double> x) {
  const std::size_t n = y.size();
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(av, _mm256_loadu_pd(x.data() + i));
    _mm256_storeu_pd(y.data() + i, _mm256_add_pd(_mm256_loadu_pd(y.data() + i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double max_abs(std::span<const Complex> x) {
  const std::size_t n = x.size();
  const auto* xp = reinterpret_cast<const double*>(x.data());
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    best = _mm256_max_pd(best, modulus_squared(_mm256_loadu_pd(xp + 2 * i)));
  }
  double result = std::sqrt(horizontal_max(best));
  if (i < n) result = std::max(result, scalar::max_abs(x.subspan(i)));
  return result;
}

double max_abs_diff(std::span<const Complex> x, std::span<const Complex> y) {
  const std::size_t n = x.size();
  const auto* xp = reinterpret_cast<const double*>(x.data());
  const auto* yp = reinterpret_cast<const double*>(y.data());
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(xp + 2 * i), _mm256_loadu_pd(yp + 2 * i));
    best = _mm256_max_pd(best, modulus_squared(d));
  }
  double result = std::sqrt(horizontal_max(best));
  if (i < n) result = std::max(result, scalar::max_abs_diff(x.subspan(i), y.subspan(i)));
  return result;
}

}  // namespace spectral_lift::simd::avx2
