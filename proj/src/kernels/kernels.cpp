#include "kintop/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace kintop::kernels {
namespace {

using detail::Ops;

Backend pick_backend() {
  if (const char* env = std::getenv("KINTOP_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return Backend::avx2;
  }
  return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

struct State {
  Backend backend;
  const Ops* ops;
};

State& state() {
  static State s = [] {
    Backend b = pick_backend();
    return State{b, b == Backend::avx2 ? &detail::avx2_ops()
                                       : &detail::scalar_ops()};
  }();
  return s;
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend active_backend() { return state().backend; }

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_supported()) b = Backend::scalar;
  state().backend = b;
  state().ops =
      b == Backend::avx2 ? &detail::avx2_ops() : &detail::scalar_ops();
}

void cmul(const cdouble* a, const cdouble* b, cdouble* dst, std::size_t n) {
  state().ops->cmul(a, b, dst, n);
}
void cmul_conj(const cdouble* a, const cdouble* b, cdouble* dst,
               std::size_t n) {
  state().ops->cmul_conj(a, b, dst, n);
}
void cmac_conj(cdouble* acc, const cdouble* a, const cdouble* b,
               std::size_t n) {
  state().ops->cmac_conj(acc, a, b, n);
}
void cadd(cdouble* acc, const cdouble* a, std::size_t n) {
  state().ops->cadd(acc, a, n);
}
double sum_abs2(const cdouble* a, std::size_t n) {
  return state().ops->sum_abs2(a, n);
}
void window_mul(const double* w, const double* x, double* dst,
                std::size_t n) {
  state().ops->window_mul(w, x, dst, n);
}

}  // namespace kintop::kernels
