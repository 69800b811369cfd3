#include "dirlab/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace dirlab::kern::ref {

std::complex<double> cdot(const double* xr, const double* xi,
                          const double* yr, const double* yi, std::size_t n) {
  double ar = 0.0, ai = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ar += xr[k] * yr[k] - xi[k] * yi[k];
    ai += xr[k] * yi[k] + xi[k] * yr[k];
  }
  return {ar, ai};
}

void cmul(double* xr, double* xi,
          const double* sr, const double* si, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double re = xr[k] * sr[k] - xi[k] * si[k];
    const double im = xr[k] * si[k] + xi[k] * sr[k];
    xr[k] = re;
    xi[k] = im;
  }
}

void caxpy(std::complex<double> a, const double* xr, const double* xi,
           double* yr, double* yi, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t k = 0; k < n; ++k) {
    yr[k] += ar * xr[k] - ai * xi[k];
    yi[k] += ar * xi[k] + ai * xr[k];
  }
}

double sum_abs_pow(const double* re, const double* im, std::size_t n, double p) {
  double acc = 0.0;
  if (p == 2.0) {
    for (std::size_t k = 0; k < n; ++k) acc += re[k] * re[k] + im[k] * im[k];
  } else if (p == 4.0) {
    for (std::size_t k = 0; k < n; ++k) {
      const double m = re[k] * re[k] + im[k] * im[k];
      acc += m * m;
    }
  } else if (p == 1.0) {
    for (std::size_t k = 0; k < n; ++k)
      acc += std::sqrt(re[k] * re[k] + im[k] * im[k]);
  } else {
    for (std::size_t k = 0; k < n; ++k)
      acc += std::pow(re[k] * re[k] + im[k] * im[k], 0.5 * p);
  }
  return acc;
}

double max_abs2(const double* re, const double* im, std::size_t n) {
  double best = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    best = std::max(best, re[k] * re[k] + im[k] * im[k]);
  return best;
}

} // namespace dirlab::kern::ref
