#include "dirlab/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace dirlab::kern {

#if defined(DIRLAB_HAVE_AVX2)
namespace avx2 {
std::complex<double> cdot(const double*, const double*, const double*, const double*, std::size_t);
void cmul(double*, double*, const double*, const double*, std::size_t);
void caxpy(std::complex<double>, const double*, const double*, double*, double*, std::size_t);
double sum_abs_pow(const double*, const double*, std::size_t, double);
double max_abs2(const double*, const double*, std::size_t);
} // namespace avx2
#endif

namespace {

bool avx2_available() {
#if defined(DIRLAB_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool initial_choice() {
  if (const char* env = std::getenv("DIRLAB_NO_SIMD"); env && env[0] == '1')
    return false;
  return avx2_available();
}

std::atomic<bool>& use_avx2() {
  static std::atomic<bool> flag{initial_choice()};
  return flag;
}

} // namespace

const char* active_isa() { return use_avx2().load() ? "avx2" : "scalar"; }

void force_scalar(bool on) { use_avx2().store(!on && avx2_available()); }

std::complex<double> cdot(const double* xr, const double* xi,
                          const double* yr, const double* yi, std::size_t n) {
#if defined(DIRLAB_HAVE_AVX2)
  if (use_avx2().load(std::memory_order_relaxed)) return avx2::cdot(xr, xi, yr, yi, n);
#endif
  return ref::cdot(xr, xi, yr, yi, n);
}

void cmul(double* xr, double* xi, const double* sr, const double* si, std::size_t n) {
#if defined(DIRLAB_HAVE_AVX2)
  if (use_avx2().load(std::memory_order_relaxed)) return avx2::cmul(xr, xi, sr, si, n);
#endif
  return ref::cmul(xr, xi, sr, si, n);
}

void caxpy(std::complex<double> a, const double* xr, const double* xi,
           double* yr, double* yi, std::size_t n) {
#if defined(DIRLAB_HAVE_AVX2)
  if (use_avx2().load(std::memory_order_relaxed)) return avx2::caxpy(a, xr, xi, yr, yi, n);
#endif
  return ref::caxpy(a, xr, xi, yr, yi, n);
}

double sum_abs_pow(const double* re, const double* im, std::size_t n, double p) {
#if defined(DIRLAB_HAVE_AVX2)
  if (use_avx2().load(std::memory_order_relaxed)) return avx2::sum_abs_pow(re, im, n, p);
#endif
  return ref::sum_abs_pow(re, im, n, p);
}

double max_abs2(const double* re, const double* im, std::size_t n) {
#if defined(DIRLAB_HAVE_AVX2)
  if (use_avx2().load(std::memory_order_relaxed)) return avx2::max_abs2(re, im, n);
#endif
  return ref::max_abs2(re, im, n);
}

} // namespace dirlab::kern
