#pragma once

#include <complex>
#include <cstddef>

// Data-parallel inner loops shared by the norm estimators. Complex data is
// kept in split (re, im) arrays so the wide lanes stay contiguous. Every
// kernel has a scalar reference implementation in kern::ref and, on x86,
// an AVX2 variant; the unqualified entry points dispatch at runtime.

namespace dirlab::kern {

// "avx2" or "scalar"
const char* active_isa();

// Pin the dispatcher to the scalar lane (equivalence tests). The environment
// variable DIRLAB_NO_SIMD=1 has the same effect at startup.
void force_scalar(bool on);

// sum_i (xr[i] + i xi[i]) * (yr[i] + i yi[i]), no conjugation
std::complex<double> cdot(const double* xr, const double* xi,
                          const double* yr, const double* yi, std::size_t n);

// (xr, xi)[i] *= (sr, si)[i]
void cmul(double* xr, double* xi,
          const double* sr, const double* si, std::size_t n);

// (yr, yi)[i] += a * (xr, xi)[i]
void caxpy(std::complex<double> a, const double* xr, const double* xi,
           double* yr, double* yi, std::size_t n);

// sum_i |re[i] + i im[i]|^p; wide lanes for p in {1, 2, 4}, otherwise scalar
double sum_abs_pow(const double* re, const double* im, std::size_t n, double p);

// max_i |re[i] + i im[i]|^2
double max_abs2(const double* re, const double* im, std::size_t n);

namespace ref {
std::complex<double> cdot(const double* xr, const double* xi,
                          const double* yr, const double* yi, std::size_t n);
void cmul(double* xr, double* xi,
          const double* sr, const double* si, std::size_t n);
void caxpy(std::complex<double> a, const double* xr, const double* xi,
           double* yr, double* yi, std::size_t n);
double sum_abs_pow(const double* re, const double* im, std::size_t n, double p);
double max_abs2(const double* re, const double* im, std::size_t n);
} // namespace ref

} // namespace dirlab::kern
