#include "kintop/kernels.hpp"

// Reference backend.  The loops are written against the same operation
// order as the AVX2 variant (including the 4-lane reduction in sum_abs2)
// so both produce bit-identical results.

namespace kintop::kernels::detail {
namespace {

inline const double* re_im(const cdouble* p) {
  return reinterpret_cast<const double*>(p);
}
inline double* re_im(cdouble* p) { return reinterpret_cast<double*>(p); }

void cmul_scalar(const cdouble* a, const cdouble* b, cdouble* dst,
                 std::size_t n) {
  const double* x = re_im(a);
  const double* y = re_im(b);
  double* d = re_im(dst);
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = x[2 * k], ai = x[2 * k + 1];
    const double br = y[2 * k], bi = y[2 * k + 1];
    d[2 * k] = ar * br - ai * bi;
    d[2 * k + 1] = ai * br + ar * bi;
  }
}

void cmul_conj_scalar(const cdouble* a, const cdouble* b, cdouble* dst,
                      std::size_t n) {
  const double* x = re_im(a);
  const double* y = re_im(b);
  double* d = re_im(dst);
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = x[2 * k], ai = x[2 * k + 1];
    const double br = y[2 * k], bi = y[2 * k + 1];
    d[2 * k] = ar * br + ai * bi;
    d[2 * k + 1] = ai * br - ar * bi;
  }
}

void cmac_conj_scalar(cdouble* acc, const cdouble* a, const cdouble* b,
                      std::size_t n) {
  const double* x = re_im(a);
  const double* y = re_im(b);
  double* d = re_im(acc);
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = x[2 * k], ai = x[2 * k + 1];
    const double br = y[2 * k], bi = y[2 * k + 1];
    d[2 * k] = d[2 * k] + (ar * br + ai * bi);
    d[2 * k + 1] = d[2 * k + 1] + (ai * br - ar * bi);
  }
}

void cadd_scalar(cdouble* acc, const cdouble* a, std::size_t n) {
  const double* x = re_im(a);
  double* d = re_im(acc);
  for (std::size_t k = 0; k < 2 * n; ++k) d[k] = d[k] + x[k];
}

double sum_abs2_scalar(const cdouble* a, std::size_t n) {
  const double* x = re_im(a);
  // Four independent accumulators striding over pairs of complex values,
  // mirroring the AVX2 lane layout, then the same combine order.
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const double* p = x + 2 * k;
    a0 = a0 + p[0] * p[0];
    a1 = a1 + p[1] * p[1];
    a2 = a2 + p[2] * p[2];
    a3 = a3 + p[3] * p[3];
  }
  double s = (a0 + a2) + (a1 + a3);
  for (; k < n; ++k) {
    const double* p = x + 2 * k;
    s = s + p[0] * p[0];
    s = s + p[1] * p[1];
  }
  return s;
}

void window_mul_scalar(const double* w, const double* x, double* dst,
                       std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) dst[k] = w[k] * x[k];
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{cmul_scalar,      cmul_conj_scalar, cmac_conj_scalar,
                       cadd_scalar,      sum_abs2_scalar,  window_mul_scalar};
  return ops;
}

}  // namespace kintop::kernels::detail
