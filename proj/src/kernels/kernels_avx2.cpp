#include <immintrin.h>

#include "kintop/kernels.hpp"

// AVX2 backend, two complex doubles per vector.  Complex products use the
// permute/addsub pattern; no fma, so each component sees the same three
// roundings as the scalar reference.

namespace kintop::kernels::detail {
namespace {

inline const double* re_im(const cdouble* p) {
  return reinterpret_cast<const double*>(p);
}
inline double* re_im(cdouble* p) { return reinterpret_cast<double*>(p); }

// [ar*br - ai*bi, ai*br + ar*bi] for two packed complex values.
inline __m256d cmul2(__m256d x, __m256d y) {
  __m256d yr = _mm256_permute_pd(y, 0x0);   // [br, br, ...]
  __m256d yi = _mm256_permute_pd(y, 0xF);   // [bi, bi, ...]
  __m256d xs = _mm256_permute_pd(x, 0x5);   // [ai, ar, ...]
  __m256d t0 = _mm256_mul_pd(x, yr);        // [ar*br, ai*br, ...]
  __m256d t1 = _mm256_mul_pd(xs, yi);       // [ai*bi, ar*bi, ...]
  return _mm256_addsub_pd(t0, t1);
}

// [ar*br + ai*bi, ai*br - ar*bi]: multiply by the conjugate of y.
inline __m256d cmul_conj2(__m256d x, __m256d y) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d yr = _mm256_permute_pd(y, 0x0);
  __m256d yi = _mm256_permute_pd(y, 0xF);
  __m256d xs = _mm256_permute_pd(x, 0x5);
  __m256d t0 = _mm256_mul_pd(x, yr);
  __m256d t1 = _mm256_xor_pd(_mm256_mul_pd(xs, yi), sign);  // negate, exact
  return _mm256_addsub_pd(t0, t1);
}

void cmul_avx2(const cdouble* a, const cdouble* b, cdouble* dst,
               std::size_t n) {
  const double* x = re_im(a);
  const double* y = re_im(b);
  double* d = re_im(dst);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    __m256d r = cmul2(_mm256_loadu_pd(x + 2 * k), _mm256_loadu_pd(y + 2 * k));
    _mm256_storeu_pd(d + 2 * k, r);
  }
  for (; k < n; ++k) {
    const double ar = x[2 * k], ai = x[2 * k + 1];
    const double br = y[2 * k], bi = y[2 * k + 1];
    d[2 * k] = ar * br - ai * bi;
    d[2 * k + 1] = ai * br + ar * bi;
  }
}

void cmul_conj_avx2(const cdouble* a, const cdouble* b, cdouble* dst,
                    std::size_t n) {
  const double* x = re_im(a);
  const double* y = re_im(b);
  double* d = re_im(dst);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    __m256d r =
        cmul_conj2(_mm256_loadu_pd(x + 2 * k), _mm256_loadu_pd(y + 2 * k));
    _mm256_storeu_pd(d + 2 * k, r);
  }
  for (; k < n; ++k) {
    const double ar = x[2 * k], ai = x[2 * k + 1];
    const double br = y[2 * k], bi = y[2 * k + 1];
    d[2 * k] = ar * br + ai * bi;
    d[2 * k + 1] = ai * br - ar * bi;
  }
}

void cmac_conj_avx2(cdouble* acc, const cdouble* a, const cdouble* b,
                    std::size_t n) {
  const double* x = re_im(a);
  const double* y = re_im(b);
  double* d = re_im(acc);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    __m256d r =
        cmul_conj2(_mm256_loadu_pd(x + 2 * k), _mm256_loadu_pd(y + 2 * k));
    __m256d s = _mm256_add_pd(_mm256_loadu_pd(d + 2 * k), r);
    _mm256_storeu_pd(d + 2 * k, s);
  }
  for (; k < n; ++k) {
    const double ar = x[2 * k], ai = x[2 * k + 1];
    const double br = y[2 * k], bi = y[2 * k + 1];
    d[2 * k] = d[2 * k] + (ar * br + ai * bi);
    d[2 * k + 1] = d[2 * k + 1] + (ai * br - ar * bi);
  }
}

void cadd_avx2(cdouble* acc, const cdouble* a, std::size_t n) {
  const double* x = re_im(a);
  double* d = re_im(acc);
  std::size_t k = 0;
  const std::size_t len = 2 * n;
  for (; k + 4 <= len; k += 4) {
    __m256d s = _mm256_add_pd(_mm256_loadu_pd(d + k), _mm256_loadu_pd(x + k));
    _mm256_storeu_pd(d + k, s);
  }
  for (; k < len; ++k) d[k] = d[k] + x[k];
}

double sum_abs2_avx2(const cdouble* a, std::size_t n) {
  const double* x = re_im(a);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    __m256d v = _mm256_loadu_pd(x + 2 * k);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  // (a0 + a2) + (a1 + a3), matching the scalar combine.
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d p = _mm_add_pd(lo, hi);                      // [a0+a2, a1+a3]
  __m128d sw = _mm_unpackhi_pd(p, p);                  // [a1+a3, a1+a3]
  double s = _mm_cvtsd_f64(_mm_add_sd(p, sw));
  for (; k < n; ++k) {
    const double* p2 = x + 2 * k;
    s = s + p2[0] * p2[0];
    s = s + p2[1] * p2[1];
  }
  return s;
}

void window_mul_avx2(const double* w, const double* x, double* dst,
                     std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d r = _mm256_mul_pd(_mm256_loadu_pd(w + k), _mm256_loadu_pd(x + k));
    _mm256_storeu_pd(dst + k, r);
  }
  for (; k < n; ++k) dst[k] = w[k] * x[k];
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops{cmul_avx2,      cmul_conj_avx2, cmac_conj_avx2,
                       cadd_avx2,      sum_abs2_avx2,  window_mul_avx2};
  return ops;
}

}  // namespace kintop::kernels::detail
