// AVX2 + FMA lane. Built only on x86_64 and only reached after the runtime
// cpuid check in kernels.cpp. Tails fall through to the reference lane.

#include "dirlab/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace dirlab::kern::avx2 {

namespace {
inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}
} // namespace

std::complex<double> cdot(const double* xr, const double* xi,
                          const double* yr, const double* yi, std::size_t n) {
  __m256d ar = _mm256_setzero_pd();
  __m256d ai = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d vxr = _mm256_loadu_pd(xr + k);
    const __m256d vxi = _mm256_loadu_pd(xi + k);
    const __m256d vyr = _mm256_loadu_pd(yr + k);
    const __m256d vyi = _mm256_loadu_pd(yi + k);
    ar = _mm256_fmadd_pd(vxr, vyr, ar);
    ar = _mm256_fnmadd_pd(vxi, vyi, ar);
    ai = _mm256_fmadd_pd(vxr, vyi, ai);
    ai = _mm256_fmadd_pd(vxi, vyr, ai);
  }
  std::complex<double> acc{hsum(ar), hsum(ai)};
  if (k < n) acc += ref::cdot(xr + k, xi + k, yr + k, yi + k, n - k);
  return acc;
}

void cmul(double* xr, double* xi,
          const double* sr, const double* si, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d vxr = _mm256_loadu_pd(xr + k);
    const __m256d vxi = _mm256_loadu_pd(xi + k);
    const __m256d vsr = _mm256_loadu_pd(sr + k);
    const __m256d vsi = _mm256_loadu_pd(si + k);
    const __m256d re = _mm256_fnmadd_pd(vxi, vsi, _mm256_mul_pd(vxr, vsr));
    const __m256d im = _mm256_fmadd_pd(vxi, vsr, _mm256_mul_pd(vxr, vsi));
    _mm256_storeu_pd(xr + k, re);
    _mm256_storeu_pd(xi + k, im);
  }
  if (k < n) ref::cmul(xr + k, xi + k, sr + k, si + k, n - k);
}

void caxpy(std::complex<double> a, const double* xr, const double* xi,
           double* yr, double* yi, std::size_t n) {
  const __m256d var = _mm256_set1_pd(a.real());
  const __m256d vai = _mm256_set1_pd(a.imag());
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d vxr = _mm256_loadu_pd(xr + k);
    const __m256d vxi = _mm256_loadu_pd(xi + k);
    __m256d re = _mm256_loadu_pd(yr + k);
    __m256d im = _mm256_loadu_pd(yi + k);
    re = _mm256_fmadd_pd(var, vxr, re);
    re = _mm256_fnmadd_pd(vai, vxi, re);
    im = _mm256_fmadd_pd(var, vxi, im);
    im = _mm256_fmadd_pd(vai, vxr, im);
    _mm256_storeu_pd(yr + k, re);
    _mm256_storeu_pd(yi + k, im);
  }
  if (k < n) ref::caxpy(a, xr + k, xi + k, yr + k, yi + k, n - k);
}

double sum_abs_pow(const double* re, const double* im, std::size_t n, double p) {
  if (p != 1.0 && p != 2.0 && p != 4.0) return ref::sum_abs_pow(re, im, n, p);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d vr = _mm256_loadu_pd(re + k);
    const __m256d vi = _mm256_loadu_pd(im + k);
    const __m256d m = _mm256_fmadd_pd(vr, vr, _mm256_mul_pd(vi, vi));
    if (p == 2.0) {
      acc = _mm256_add_pd(acc, m);
    } else if (p == 4.0) {
      acc = _mm256_fmadd_pd(m, m, acc);
    } else {
      acc = _mm256_add_pd(acc, _mm256_sqrt_pd(m));
    }
  }
  double total = hsum(acc);
  if (k < n) total += ref::sum_abs_pow(re + k, im + k, n - k, p);
  return total;
}

double max_abs2(const double* re, const double* im, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d vr = _mm256_loadu_pd(re + k);
    const __m256d vi = _mm256_loadu_pd(im + k);
    acc = _mm256_max_pd(acc, _mm256_fmadd_pd(vr, vr, _mm256_mul_pd(vi, vi)));
  }
  double best = hmax(acc);
  if (k < n) best = std::max(best, ref::max_abs2(re + k, im + k, n - k));
  return best;
}

} // namespace dirlab::kern::avx2
