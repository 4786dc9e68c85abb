#pragma once

#include <complex>
#include <cstddef>

// Data-parallel inner loops shared by the spectral code: pointwise complex
// products, cross-spectral accumulation and norm reductions.
//
// Two backends exist, a scalar reference and an AVX2 variant, selected once
// at startup from cpuid (override with KINTOP_KERNELS=scalar|avx2).  Both
// backends perform the same floating point operations in the same order, so
// their results are bit-identical; the equivalence tests assert exactly that.

namespace kintop::kernels {

using cdouble = std::complex<double>;

enum class Backend { scalar, avx2 };

Backend active_backend();
const char* backend_name(Backend b);

// Test hook. Not thread-safe; call before spinning up any concurrent work.
void set_backend(Backend b);
bool avx2_supported();

// dst[k] = a[k] * b[k]
void cmul(const cdouble* a, const cdouble* b, cdouble* dst, std::size_t n);

// dst[k] = a[k] * conj(b[k])
void cmul_conj(const cdouble* a, const cdouble* b, cdouble* dst, std::size_t n);

// acc[k] += a[k] * conj(b[k])   (Welch cross-periodogram accumulation)
void cmac_conj(cdouble* acc, const cdouble* a, const cdouble* b, std::size_t n);

// acc[k] += a[k]
void cadd(cdouble* acc, const cdouble* a, std::size_t n);

// sum_k |a[k]|^2 with a fixed lane-blocked reduction order.
double sum_abs2(const cdouble* a, std::size_t n);

// dst[k] = w[k] * x[k]
void window_mul(const double* w, const double* x, double* dst, std::size_t n);

namespace detail {

struct Ops {
  void (*cmul)(const cdouble*, const cdouble*, cdouble*, std::size_t);
  void (*cmul_conj)(const cdouble*, const cdouble*, cdouble*, std::size_t);
  void (*cmac_conj)(cdouble*, const cdouble*, const cdouble*, std::size_t);
  void (*cadd)(cdouble*, const cdouble*, std::size_t);
  double (*sum_abs2)(const cdouble*, std::size_t);
  void (*window_mul)(const double*, const double*, double*, std::size_t);
};

const Ops& scalar_ops();
const Ops& avx2_ops();

}  // namespace detail

}  // namespace kintop::kernels
