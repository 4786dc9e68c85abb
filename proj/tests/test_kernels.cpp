#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "kintop/kernels.hpp"

using kintop::kernels::Backend;
using cdouble = std::complex<double>;

namespace {

std::vector<cdouble> random_cvec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<cdouble> v(n);
  for (auto& c : v) c = cdouble(u(rng), u(rng));
  return v;
}

const std::size_t kLens[] = {0, 1, 2, 3, 5, 8, 33, 129, 515};

}  // namespace

TEST_CASE("pointwise products match std::complex arithmetic") {
  for (std::size_t n : kLens) {
    auto a = random_cvec(n, 10 + n);
    auto b = random_cvec(n, 20 + n);
    std::vector<cdouble> dst(n), acc(n, cdouble(0.5, -0.25)), acc_ref = acc;
    kintop::kernels::cmul(a.data(), b.data(), dst.data(), n);
    for (std::size_t k = 0; k < n; ++k)
      CHECK(std::abs(dst[k] - a[k] * b[k]) < 1e-14);
    kintop::kernels::cmul_conj(a.data(), b.data(), dst.data(), n);
    for (std::size_t k = 0; k < n; ++k)
      CHECK(std::abs(dst[k] - a[k] * std::conj(b[k])) < 1e-14);
    kintop::kernels::cmac_conj(acc.data(), a.data(), b.data(), n);
    for (std::size_t k = 0; k < n; ++k)
      CHECK(std::abs(acc[k] - (acc_ref[k] + a[k] * std::conj(b[k]))) < 1e-14);
  }
}

TEST_CASE("sum_abs2 matches a plain accumulation") {
  for (std::size_t n : kLens) {
    auto a = random_cvec(n, 30 + n);
    double want = 0.0;
    for (const auto& c : a) want += std::norm(c);
    CHECK(kintop::kernels::sum_abs2(a.data(), n) ==
          doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("window_mul") {
  std::vector<double> w = {0.5, 1.0, 2.0, 0.0, -1.0};
  std::vector<double> x = {2.0, 3.0, 4.0, 5.0, 6.0};
  std::vector<double> d(5);
  kintop::kernels::window_mul(w.data(), x.data(), d.data(), 5);
  CHECK(d == std::vector<double>{1.0, 3.0, 8.0, 0.0, -6.0});
}

TEST_CASE("scalar and avx2 backends are bit-identical") {
  if (!kintop::kernels::avx2_supported()) {
    MESSAGE("avx2 unavailable, skipping");
    return;
  }
  const Backend saved = kintop::kernels::active_backend();
  for (std::size_t n : kLens) {
    auto a = random_cvec(n, 40 + n);
    auto b = random_cvec(n, 50 + n);
    auto acc0 = random_cvec(n, 60 + n);

    std::vector<cdouble> mul_s(n), mul_a(n), conj_s(n), conj_a(n);
    std::vector<cdouble> mac_s = acc0, mac_a = acc0;
    std::vector<cdouble> add_s = acc0, add_a = acc0;
    std::vector<double> wr(n), xr(n), win_s(n), win_a(n);
    for (std::size_t k = 0; k < n; ++k) {
      wr[k] = a[k].real();
      xr[k] = b[k].real();
    }

    kintop::kernels::set_backend(Backend::scalar);
    kintop::kernels::cmul(a.data(), b.data(), mul_s.data(), n);
    kintop::kernels::cmul_conj(a.data(), b.data(), conj_s.data(), n);
    kintop::kernels::cmac_conj(mac_s.data(), a.data(), b.data(), n);
    kintop::kernels::cadd(add_s.data(), a.data(), n);
    const double sum_s = kintop::kernels::sum_abs2(a.data(), n);
    kintop::kernels::window_mul(wr.data(), xr.data(), win_s.data(), n);

    kintop::kernels::set_backend(Backend::avx2);
    kintop::kernels::cmul(a.data(), b.data(), mul_a.data(), n);
    kintop::kernels::cmul_conj(a.data(), b.data(), conj_a.data(), n);
    kintop::kernels::cmac_conj(mac_a.data(), a.data(), b.data(), n);
    kintop::kernels::cadd(add_a.data(), a.data(), n);
    const double sum_a = kintop::kernels::sum_abs2(a.data(), n);
    kintop::kernels::window_mul(wr.data(), xr.data(), win_a.data(), n);

    kintop::kernels::set_backend(saved);

    CHECK(std::memcmp(mul_s.data(), mul_a.data(), n * sizeof(cdouble)) == 0);
    CHECK(std::memcmp(conj_s.data(), conj_a.data(), n * sizeof(cdouble)) == 0);
    CHECK(std::memcmp(mac_s.data(), mac_a.data(), n * sizeof(cdouble)) == 0);
    CHECK(std::memcmp(add_s.data(), add_a.data(), n * sizeof(cdouble)) == 0);
    CHECK(std::memcmp(win_s.data(), win_a.data(), n * sizeof(double)) == 0);
    CHECK(sum_s == sum_a);  // exact
  }
}
