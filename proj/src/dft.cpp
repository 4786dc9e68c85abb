#include "kintop/dft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "kintop/errors.hpp"

namespace kintop::dft {
namespace {

// FFTW planning is not thread-safe; executing a cached plan on fresh buffers
// via the new-array interface is.  Plans use FFTW_UNALIGNED so they accept
// whatever std::vector hands us.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan get_c2c_plan(std::size_t m, int sign) {
  static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto key = std::make_pair(m, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<cdouble> tmp_in(m), tmp_out(m);
  fftw_plan p = fftw_plan_dft_1d(
      static_cast<int>(m), reinterpret_cast<fftw_complex*>(tmp_in.data()),
      reinterpret_cast<fftw_complex*>(tmp_out.data()), sign,
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw NumericalError("fftw plan creation failed");
  cache.emplace(key, p);
  return p;
}

fftw_plan get_r2c_plan(std::size_t m) {
  static std::map<std::size_t, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  std::vector<double> tmp_in(m);
  std::vector<cdouble> tmp_out(m / 2 + 1);
  fftw_plan p = fftw_plan_dft_r2c_1d(
      static_cast<int>(m), tmp_in.data(),
      reinterpret_cast<fftw_complex*>(tmp_out.data()),
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw NumericalError("fftw plan creation failed");
  cache.emplace(m, p);
  return p;
}

}  // namespace

void fft(const cdouble* in, cdouble* out, std::size_t m) {
  fftw_plan p = get_c2c_plan(m, FFTW_FORWARD);
  fftw_execute_dft(p,
                   reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void ifft(const cdouble* in, cdouble* out, std::size_t m) {
  fftw_plan p = get_c2c_plan(m, FFTW_BACKWARD);
  fftw_execute_dft(p,
                   reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) out[k] *= scale;
}

void rfft(const double* in, cdouble* out, std::size_t m) {
  fftw_plan p = get_r2c_plan(m);
  fftw_execute_dft_r2c(p, const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

std::vector<cdouble> fft(const std::vector<cdouble>& in) {
  std::vector<cdouble> out(in.size());
  fft(in.data(), out.data(), in.size());
  return out;
}

std::vector<cdouble> ifft(const std::vector<cdouble>& in) {
  std::vector<cdouble> out(in.size());
  ifft(in.data(), out.data(), in.size());
  return out;
}

}  // namespace kintop::dft
