#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kintop/lti.hpp"
#include "kintop/panel.hpp"

// Cross-power spectral density matrices on the shared frequency grid, and
// their estimation from data by Welch's averaged periodogram.

namespace kintop::spectra {

using cdouble = std::complex<double>;

struct SpectralMatrix {
  lti::FrequencyGrid grid;
  int n = 0;
  std::vector<Eigen::MatrixXcd> values;  // one n-by-n matrix per bin

  SpectralMatrix() = default;
  SpectralMatrix(lti::FrequencyGrid g, int nodes)
      : grid(g), n(nodes),
        values(g.m, Eigen::MatrixXcd::Zero(nodes, nodes)) {}
};

enum class Window { hann, rect };

struct WelchConfig {
  std::size_t segment_length = 256;  // equals the grid size
  double overlap = 0.5;              // in [0, 1)
  Window window = Window::hann;
  bool detrend = true;               // per-segment mean removal
};

// Hermitian cross-periodogram average.  The window power is normalized so a
// unit-variance white channel produces a flat diagonal near 1.  Segment
// periodograms are combined with a pairwise tree reduction, so the result
// does not depend on any execution schedule.
SpectralMatrix estimate_csd(const ldg::TimeSeriesPanel& panel,
                            const WelchConfig& cfg);

// |S_ij|^2 / (S_ii S_jj) per bin, clamped to [0, 1].
std::vector<double> coherence(const SpectralMatrix& S, int i, int j);

struct ConditionReport {
  std::vector<double> cond;  // 2-norm condition number per bin, +inf sentinel
  std::size_t worst_bin = 0;
  double worst = 0.0;
};
ConditionReport condition_report(const SpectralMatrix& S);

// Binary: magic "CSDM", u32 n, u32 m, then bin-major complex128 row-major
// matrices.
void write_csdm(const SpectralMatrix& S, const std::string& path);
SpectralMatrix read_csdm(const std::string& path);

// JSON form for small matrices (n <= 8), used by golden tests.
nlohmann::json to_json(const SpectralMatrix& S);
SpectralMatrix spectral_matrix_from_json(const nlohmann::json& j);

}  // namespace kintop::spectra
