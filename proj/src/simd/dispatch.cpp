#include <atomic>

#include "spectral_lift/simd/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <cpuid.h>
#endif

namespace spectral_lift::simd {

namespace {

bool detect_avx2() noexcept {
#if defined(SPECTRAL_LIFT_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  unsigned eax = 0, ebx = 0, ecx = 0, edx = 0;
  if (__get_cpuid_max(0, nullptr) < 7) return false;
  __cpuid(1, eax, ebx, ecx, edx);
  const bool osxsave = (ecx & (1u << 27)) != 0;
  const bool avx = (ecx & (1u << 28)) != 0;
  if (!osxsave || !avx) return false;
  // The OS must save the YMM state.
  unsigned xcr0_lo = 0, xcr0_hi = 0;
  __asm__("xgetbv" : "=a"(xcr0_lo), "=d"(xcr0_hi) : "c"(0));
  if ((xcr0_lo & 0x6u) != 0x6u) return false;
  __cpuid_count(7, 0, eax, ebx, ecx, edx);
  return (ebx & (1u << 5)) != 0;
#else
  return false;
#endif
}

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{cpu_supports_avx2() ? Isa::avx2 : Isa::scalar};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool cpu_supports_avx2() noexcept {
  static const bool supported = detect_avx2();
  return supported;
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

Isa force_isa(Isa isa) noexcept {
  if (isa == Isa::avx2 && !cpu_supports_avx2()) isa = Isa::scalar;
  current().store(isa, std::memory_order_relaxed);
  return isa;
}

#if defined(SPECTRAL_LIFT_HAVE_AVX2)
#define SPECTRAL_LIFT_DISPATCH(fn, ...) \
  (active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define SPECTRAL_LIFT_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void caxpy(std::span<Complex> y, Complex a, std::span<const Complex> x) {
  SPECTRAL_LIFT_DISPATCH(caxpy, y, a, x);
}

void axpy(std::span<double> y, double a, std::span<const double> x) {
  SPECTRAL_LIFT_DISPATCH(axpy, y, a, x);
}

double max_abs(std::span<const Complex> x) { return SPECTRAL_LIFT_DISPATCH(max_abs, x); }

double max_abs_diff(std::span<const Complex> x, std::span<const Complex> y) {
  return SPECTRAL_LIFT_DISPATCH(max_abs_diff, x, y);
}

#undef SPECTRAL_LIFT_DISPATCH

}  // namespace spectral_lift::simd
