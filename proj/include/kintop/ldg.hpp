#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kintop/graph.hpp"
#include "kintop/lti.hpp"
#include "kintop/panel.hpp"
#include "kintop/spectra.hpp"

// The generative model: a directed graph whose arcs carry transfer functions,
// driven by mutually uncorrelated shaped noise.  Node j obeys
//   x_j = e_j + sum_i H_ji(z) x_i
// over the arcs i -> j, collected as x = e + H(z) x.

namespace kintop::ldg {

struct NoiseSpec {
  lti::TransferFunction shaping = lti::TransferFunction::identity();
  double variance = 1.0;
};

enum class Innovations { gaussian, uniform };

struct LdgModel {
  graph::DirectedGraph g;
  // Keyed by arc (from, to); the stored tf is H_{to,from}.
  std::map<graph::Edge, lti::TransferFunction> links;
  std::vector<NoiseSpec> noise;
  std::optional<std::vector<NoiseSpec>> measurement_noise;
  Innovations innovations = Innovations::gaussian;

  int n() const { return g.n; }
  const lti::TransferFunction& link(int from, int to) const;
  void add_link(int from, int to, lti::TransferFunction tf);

  // Arc/link bijection, nonzero links, no antiparallel arcs, causal shaping,
  // positive variances.  Throws ValidationError.
  void check_structure() const;
};

struct ValidationCertificate {
  bool well_posed = false;
  double min_det = 0.0;  // min over the grid of |det(I - H)|
  bool detectable = false;
  bool causal = false;
  bool strictly_causal = false;
};

ValidationCertificate validate(const LdgModel& model,
                               const lti::FrequencyGrid& grid =
                                   lti::FrequencyGrid(256));

// Per-node noise PSD samples: psd(k, j) = variance_j |shaping_j(w_k)|^2.
Eigen::MatrixXd noise_psd(const std::vector<NoiseSpec>& specs,
                          const lti::FrequencyGrid& grid);

// Phi_x(w) = T(w) Phi_e(w) T*(w) with T = (I - H)^{-1}, exact on the grid.
spectra::SpectralMatrix analytic_psd(const LdgModel& model,
                                     const lti::FrequencyGrid& grid);

// Phi_y = Phi_x + Phi_eta (requires measurement_noise).
spectra::SpectralMatrix analytic_output_psd(const LdgModel& model,
                                            const lti::FrequencyGrid& grid);

// Time-domain recursion for causal models.  Direct feedthrough (lag-0 taps)
// is resolved with a constant (I - H_0) solve.  Burn-in of
// max(500, 10 * longest link support) samples is discarded.
TimeSeriesPanel simulate(const LdgModel& model, long T, std::uint64_t seed);

// y = x + eta with eta drawn from measurement_noise on an independent
// stream.
TimeSeriesPanel corrupt(const TimeSeriesPanel& panel, const LdgModel& model,
                        std::uint64_t seed);

// Model file: {"n", "edges": [{"from","to","tf"}...], "noise": [...],
// "measurement_noise": optional}.
nlohmann::json to_json(const LdgModel& model);
LdgModel model_from_json(const nlohmann::json& j);
LdgModel load_model(const std::string& path);
void save_model(const LdgModel& model, const std::string& path);

}  // namespace kintop::ldg
