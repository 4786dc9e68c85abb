#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kintop/errors.hpp"

// Multichannel time series produced by the network simulator.  Stored
// channel-major so spectral estimation reads each channel contiguously.

namespace kintop::ldg {

struct TimeSeriesPanel {
  int n = 0;
  long T = 0;
  std::uint64_t seed = 0;
  std::vector<double> data;  // data[j*T + t]

  TimeSeriesPanel() = default;
  TimeSeriesPanel(int channels, long samples, std::uint64_t seed_value)
      : n(channels), T(samples), seed(seed_value),
        data(static_cast<std::size_t>(channels) * samples, 0.0) {}

  double at(int j, long t) const {
    return data[static_cast<std::size_t>(j) * T + t];
  }
  double& at(int j, long t) {
    return data[static_cast<std::size_t>(j) * T + t];
  }
  const double* channel(int j) const {
    return data.data() + static_cast<std::size_t>(j) * T;
  }
};

// CSV: header row x0..x{n-1}, one row per sample.
void write_panel_csv(const TimeSeriesPanel& p, const std::string& path);
TimeSeriesPanel read_panel_csv(const std::string& path);

// Raw little-endian float64 frames behind a 16-byte header
// (magic "LDGP", u32 n, u32 T, u32 reserved).
void write_panel_bin(const TimeSeriesPanel& p, const std::string& path);
TimeSeriesPanel read_panel_bin(const std::string& path);

// Dispatch on extension (.csv / .bin).
void write_panel(const TimeSeriesPanel& p, const std::string& path);
TimeSeriesPanel read_panel(const std::string& path);

}  // namespace kintop::ldg
