#include "kintop/lti.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "kintop/dft.hpp"
#include "kintop/kernels.hpp"

namespace kintop::lti {

namespace {

void require_same_grid(const FrequencyResponse& a, const FrequencyResponse& b) {
  if (!(a.grid == b.grid))
    throw ValidationError("frequency responses live on different grids");
}

// Poles of num/den in powers of z^{-1}: roots of z^N den(z^{-1}).
std::vector<cdouble> denominator_poles(const std::vector<double>& den) {
  const std::size_t deg = den.size() - 1;
  if (deg == 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (std::size_t i = 0; i < deg; ++i)
    companion(0, i) = -den[i + 1] / den[0];
  for (std::size_t i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  Eigen::VectorXcd ev = companion.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

TransferFunction expand_rational(const std::vector<double>& num,
                                 const std::vector<double>& den,
                                 std::size_t max_taps) {
  if (den.empty() || den[0] == 0.0)
    throw ValidationError("rational tf: den[0] must be nonzero");
  for (const cdouble& p : denominator_poles(den)) {
    if (std::abs(p) >= 1.0 - 1e-9)
      throw ValidationError(
          "rational tf: denominator has a pole on or outside the unit disk");
  }
  // Long division of the causal rational: h[t] = (num[t] - sum den[k] h[t-k]) / den[0].
  std::vector<double> h(max_taps, 0.0);
  for (std::size_t t = 0; t < max_taps; ++t) {
    double acc = t < num.size() ? num[t] : 0.0;
    for (std::size_t k = 1; k < den.size() && k <= t; ++k)
      acc -= den[k] * h[t - k];
    h[t] = acc / den[0];
  }
  double total = 0.0, tail = 0.0;
  for (std::size_t t = 0; t < max_taps; ++t) {
    total += h[t] * h[t];
    if (t + 8 >= max_taps) tail += h[t] * h[t];
  }
  if (total > 0.0 && tail > 1e-20 * total)
    throw ValidationError(
        "rational tf: impulse response tail above 1e-10 of total at the "
        "configured expansion length; raise expansion_taps or move poles "
        "away from the unit circle");
  return TransferFunction(std::move(h), 0);
}

}  // namespace

FrequencyGrid::FrequencyGrid(std::size_t bins) : m(bins) {
  if (m < 2 || m % 2 != 0)
    throw ValidationError("frequency grid size must be even and >= 2");
}

double FrequencyGrid::omega(std::size_t k) const {
  return 2.0 * std::numbers::pi * static_cast<double>(k) /
         static_cast<double>(m);
}

TransferFunction::TransferFunction(std::vector<double> taps, long offset)
    : taps_(std::move(taps)), offset_(offset) {
  std::size_t lead = 0;
  while (lead < taps_.size() && taps_[lead] == 0.0) ++lead;
  std::size_t tail = taps_.size();
  while (tail > lead && taps_[tail - 1] == 0.0) --tail;
  if (lead > 0 || tail < taps_.size()) {
    taps_ = std::vector<double>(taps_.begin() + static_cast<long>(lead),
                                taps_.begin() + static_cast<long>(tail));
    offset_ += static_cast<long>(lead);
  }
  if (taps_.empty()) offset_ = 0;
}

TransferFunction TransferFunction::identity() {
  return TransferFunction({1.0}, 0);
}

TransferFunction TransferFunction::delay(long k) {
  return TransferFunction({1.0}, k);
}

TransferFunction TransferFunction::scaled(double c) const {
  if (c == 0.0) return TransferFunction();
  std::vector<double> t = taps_;
  for (double& v : t) v *= c;
  return TransferFunction(std::move(t), offset_);
}

FrequencyResponse::FrequencyResponse(FrequencyGrid g, std::vector<cdouble> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.m)
    throw ValidationError("frequency response size does not match grid");
}

FrequencyResponse freq_response(const TransferFunction& tf,
                                const FrequencyGrid& grid) {
  const std::size_t m = grid.m;
  std::vector<cdouble> buf(m, cdouble(0.0, 0.0));
  const auto& taps = tf.taps();
  for (std::size_t j = 0; j < taps.size(); ++j) {
    long power = tf.offset() + static_cast<long>(j);
    long idx = power % static_cast<long>(m);
    if (idx < 0) idx += static_cast<long>(m);
    buf[static_cast<std::size_t>(idx)] += taps[j];
  }
  FrequencyResponse fr(grid);
  dft::fft(buf.data(), fr.values.data(), m);
  // Real taps: pin exact conjugate-bin symmetry.
  fr.values[0] = cdouble(fr.values[0].real(), 0.0);
  fr.values[m / 2] = cdouble(fr.values[m / 2].real(), 0.0);
  for (std::size_t k = 1; k < m / 2; ++k)
    fr.values[m - k] = std::conj(fr.values[k]);
  return fr;
}

TransferFunction causal_truncation(const TransferFunction& tf) {
  if (tf.is_causal()) return tf;
  long drop = -tf.offset();
  if (drop >= static_cast<long>(tf.taps().size())) return TransferFunction();
  std::vector<double> kept(tf.taps().begin() + drop, tf.taps().end());
  return TransferFunction(std::move(kept), 0);
}

double l2_norm(const FrequencyResponse& fr) {
  if (fr.values.empty()) return 0.0;
  return std::sqrt(kernels::sum_abs2(fr.values.data(), fr.values.size()) /
                   static_cast<double>(fr.values.size()));
}

FrequencyResponse add(const FrequencyResponse& a, const FrequencyResponse& b) {
  require_same_grid(a, b);
  FrequencyResponse out(a.grid);
  for (std::size_t k = 0; k < a.values.size(); ++k)
    out.values[k] = a.values[k] + b.values[k];
  return out;
}

FrequencyResponse subtract(const FrequencyResponse& a,
                           const FrequencyResponse& b) {
  require_same_grid(a, b);
  FrequencyResponse out(a.grid);
  for (std::size_t k = 0; k < a.values.size(); ++k)
    out.values[k] = a.values[k] - b.values[k];
  return out;
}

FrequencyResponse multiply(const FrequencyResponse& a,
                           const FrequencyResponse& b) {
  require_same_grid(a, b);
  FrequencyResponse out(a.grid);
  kernels::cmul(a.values.data(), b.values.data(), out.values.data(),
                a.values.size());
  return out;
}

FrequencyResponse conjugate_response(const FrequencyResponse& fr) {
  FrequencyResponse out(fr.grid);
  for (std::size_t k = 0; k < fr.values.size(); ++k)
    out.values[k] = std::conj(fr.values[k]);
  return out;
}

std::vector<cdouble> response_taps(const FrequencyResponse& fr) {
  std::vector<cdouble> taps(fr.values.size());
  dft::ifft(fr.values.data(), taps.data(), fr.values.size());
  return taps;
}

FrequencyResponse causal_truncate_response(const FrequencyResponse& fr) {
  const std::size_t m = fr.grid.m;
  std::vector<cdouble> taps = response_taps(fr);
  for (std::size_t t = m / 2; t < m; ++t) taps[t] = cdouble(0.0, 0.0);
  FrequencyResponse out(fr.grid);
  dft::fft(taps.data(), out.values.data(), m);
  return out;
}

double anticausal_energy_fraction(const FrequencyResponse& fr) {
  const std::size_t m = fr.grid.m;
  std::vector<cdouble> taps = response_taps(fr);
  double total = kernels::sum_abs2(taps.data(), m);
  if (total == 0.0) return 0.0;
  double anti = kernels::sum_abs2(taps.data() + m / 2, m - m / 2);
  return anti / total;
}

double tail_energy_fraction(const FrequencyResponse& fr,
                            std::size_t lag_limit) {
  const std::size_t m = fr.grid.m;
  std::vector<cdouble> taps = response_taps(fr);
  double total = 0.0, tail = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    const std::size_t lag = t < m / 2 ? t : m - t;  // |lag| on the circle
    const double e = std::norm(taps[t]);
    total += e;
    if (lag >= lag_limit) tail += e;
  }
  if (total == 0.0) return 0.0;
  return tail / total;
}

TransferFunction tf_from_json(const nlohmann::json& j, std::size_t max_taps) {
  if (j.contains("taps")) {
    std::vector<double> taps = j.at("taps").get<std::vector<double>>();
    long offset = j.value("offset", 0L);
    return TransferFunction(std::move(taps), offset);
  }
  if (j.contains("num")) {
    auto num = j.at("num").get<std::vector<double>>();
    auto den = j.value("den", std::vector<double>{1.0});
    return expand_rational(num, den, max_taps);
  }
  throw ValidationError("transfer function spec needs 'taps' or 'num'");
}

nlohmann::json tf_to_json(const TransferFunction& tf) {
  return nlohmann::json{{"taps", tf.taps()}, {"offset", tf.offset()}};
}

}  // namespace kintop::lti
