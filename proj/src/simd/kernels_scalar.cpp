#include "spectral_lift/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace spectral_lift::simd::scalar {

void caxpy(std::span<Complex> y, Complex a, std::span<const Complex> x) {
  const double ar = a.real();
  const double ai = a.imag();
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    const double re = ar * xr - ai * xi;
    const double im = ar * xi + ai * xr;
    y[i] = Complex(y[i].real() + re, y[i].imag() + im);
  }
}

void axpy(std::span<double> y, double a, std::span<const double> x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

double max_abs(std::span<const Complex> x) {
  double best = 0.0;
  for (const Complex& z : x) {
    best = std::max(best, std::sqrt(z.real() * z.real() + z.imag() * z.imag()));
  }
  return best;
}

double max_abs_diff(std::span<const Complex> x, std::span<const Complex> y) {
  double best = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dr = x[i].real() - y[i].real();
    const double di = x[i].imag() - y[i].imag();
    best = std::max(best, std::sqrt(dr * dr + di * di));
  }
  return best;
}

}  // namespace spectral_lift::simd::scalar
