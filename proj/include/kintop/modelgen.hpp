#pragma once

#include <cstdint>
#include <string>

#include "kintop/ldg.hpp"

// Seeded generators for the bundled network families: rings, arborescences,
// generic random digraphs, the four small worked configurations and the
// 24-node generic network.  Links are random FIR filters normalized so the
// loop matrix stays a contraction on the unit circle, which keeps every
// generated model well posed.

namespace kintop::modelgen {

struct GenParams {
  int n = 8;
  int fir_order = 2;
  bool strictly_causal = true;  // lags 1..order; otherwise 0..order
  double gain = 0.85;           // cap on max_w ||H(w)||_2
  double density = 0.1;         // arc probability for random graphs
  double noise_variance = 1.0;
  bool varied_noise = false;    // per-node variances in [0.5, 2] * variance
  bool shaped_noise = false;    // random MA(1) noise shaping
  double meas_variance = 0.0;   // > 0 attaches white measurement noise
  std::uint64_t seed = 1;
};

// kind: ring | tree | random | example-2-1 .. example-2-4 | net24.
// Ill-posed draws are regenerated up to 20 times before giving up.
ldg::LdgModel gen_model(const std::string& kind, const GenParams& params);

}  // namespace kintop::modelgen
