#pragma once
// Data-parallel inner loops used by operator_core and lift_engine.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The active variant is chosen once at startup from CPUID. Element-wise
// kernels are bit-identical between variants (no FMA, same operation order);
// reductions over max are order independent, so they match exactly as well.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace spectral_lift::simd {

using Complex = std::complex<double>;

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// True when the running CPU reports AVX2 and the variant was compiled in.
bool cpu_supports_avx2() noexcept;

/// The variant dispatched by the public entry points below.
Isa active_isa() noexcept;

/// Overrides dispatch (tests and benchmarking). Requesting avx2 on a CPU
/// without it falls back to scalar; the effective choice is returned.
Isa force_isa(Isa isa) noexcept;

/// y[i] += a * x[i]
void caxpy(std::span<Complex> y, Complex a, std::span<const Complex> x);

/// y[i] += a * x[i] on real data.
void axpy(std::span<double> y, double a, std::span<const double> x);

/// max_i |x[i]| with |z| = sqrt(re^2 + im^2).
double max_abs(std::span<const Complex> x);

/// max_i |x[i] - y[i]|
double max_abs_diff(std::span<const Complex> x, std::span<const Complex> y);

namespace scalar {
void caxpy(std::span<Complex> y, Complex a, std::span<const Complex> x);
void axpy(std::span<double> y, double a, std::span<const double> x);
double max_abs(std::span<const Complex> x);
double max_abs_diff(std::span<const Complex> x, std::span<const Complex> y);
}  // namespace scalar

#if defined(SPECTRAL_LIFT_HAVE_AVX2)
namespace avx2 {
void caxpy(std::span<Complex> y, Complex a, std::span<const Complex> x);
void axpy(std::span<double> y, double a, std::span<const double> x);
double max_abs(std::span<const Complex> x);
double max_abs_diff(std::span<const Complex> x, std::span<const Complex> y);
}  // namespace avx2
#endif

}  // namespace spectral_lift::simd
