#pragma once

#include <complex>
#include <cstddef>
#include <vector>

// Thin FFTW wrapper.  Plans are cached per size, created under a mutex with
// FFTW_ESTIMATE so planning is deterministic; execution is thread-safe.
//
// Conventions: fft computes X[k] = sum_t x[t] e^{-2pi i k t / m}, ifft is its
// exact inverse (scaled by 1/m).

namespace kintop::dft {

using cdouble = std::complex<double>;

void fft(const cdouble* in, cdouble* out, std::size_t m);
void ifft(const cdouble* in, cdouble* out, std::size_t m);

// Real input, bins 0..m/2 (the caller mirrors the rest when needed).
void rfft(const double* in, cdouble* out, std::size_t m);

std::vector<cdouble> fft(const std::vector<cdouble>& in);
std::vector<cdouble> ifft(const std::vector<cdouble>& in);

}  // namespace kintop::dft
