#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kintop/errors.hpp"

// Transfer functions as finite two-sided impulse responses in the delay
// operator: H(z) = sum_k h_k z^{-k} with integer k allowed to be negative
// (anticausal taps).  All spectral algebra happens on a shared uniform
// frequency grid over [0, 2pi).

namespace kintop::lti {

using cdouble = std::complex<double>;

struct FrequencyGrid {
  std::size_t m = 256;

  FrequencyGrid() = default;
  explicit FrequencyGrid(std::size_t bins);

  double omega(std::size_t k) const;
  bool operator==(const FrequencyGrid&) const = default;
};

class TransferFunction {
 public:
  TransferFunction() = default;  // the zero transfer function
  TransferFunction(std::vector<double> taps, long offset);

  static TransferFunction identity();
  static TransferFunction delay(long k);  // z^{-k}

  const std::vector<double>& taps() const { return taps_; }
  long offset() const { return offset_; }

  bool is_zero() const { return taps_.empty(); }
  // Power of z^{-1} of the first / last tap.  Meaningless for the zero tf.
  long min_power() const { return offset_; }
  long max_power() const {
    return offset_ + static_cast<long>(taps_.size()) - 1;
  }
  bool is_causal() const { return taps_.empty() || offset_ >= 0; }
  bool is_strictly_causal() const { return taps_.empty() || offset_ >= 1; }

  TransferFunction scaled(double c) const;

  bool operator==(const TransferFunction&) const = default;

 private:
  std::vector<double> taps_;  // canonical: no leading/trailing zeros
  long offset_ = 0;
};

struct FrequencyResponse {
  FrequencyGrid grid;
  std::vector<cdouble> values;

  FrequencyResponse() = default;
  explicit FrequencyResponse(FrequencyGrid g)
      : grid(g), values(g.m, cdouble(0.0, 0.0)) {}
  FrequencyResponse(FrequencyGrid g, std::vector<cdouble> v);
};

// values[k] = sum_j taps[j] e^{-i omega_k (offset+j)}.  Exact conjugate-bin
// symmetry is enforced (taps are real).
FrequencyResponse freq_response(const TransferFunction& tf,
                                const FrequencyGrid& grid);

// Drop every tap with a negative power of z^{-1}.
TransferFunction causal_truncation(const TransferFunction& tf);

// sqrt((1/m) sum_k |values[k]|^2)
double l2_norm(const FrequencyResponse& fr);

FrequencyResponse add(const FrequencyResponse& a, const FrequencyResponse& b);
FrequencyResponse subtract(const FrequencyResponse& a,
                           const FrequencyResponse& b);
FrequencyResponse multiply(const FrequencyResponse& a,
                           const FrequencyResponse& b);
// H*(z) on the unit circle: pointwise conjugate.
FrequencyResponse conjugate_response(const FrequencyResponse& fr);

// Grid taps of a sampled response: index t < m/2 is lag t, index t >= m/2 is
// lag t - m.  Inverse of the DFT underlying freq_response for supports that
// fit the grid.
std::vector<cdouble> response_taps(const FrequencyResponse& fr);

// Zero the negative-lag half of the grid taps (indices m/2..m-1).
FrequencyResponse causal_truncate_response(const FrequencyResponse& fr);

// Fraction of tap energy on the negative-lag half.
double anticausal_energy_fraction(const FrequencyResponse& fr);

// Fraction of tap energy at |lag| >= lag_limit; guards circular aliasing.
double tail_energy_fraction(const FrequencyResponse& fr, std::size_t lag_limit);

// Config-file form: {"taps": [...], "offset": k} or {"num": [...], "den":
// [...]} (causal rational, poles strictly inside the unit disk, expanded to
// an impulse response of at most max_taps coefficients).
TransferFunction tf_from_json(const nlohmann::json& j,
                              std::size_t max_taps = 64);
nlohmann::json tf_to_json(const TransferFunction& tf);

}  // namespace kintop::lti
