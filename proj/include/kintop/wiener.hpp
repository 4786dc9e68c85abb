#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kintop/graph.hpp"
#include "kintop/ldg.hpp"
#include "kintop/lti.hpp"
#include "kintop/spectra.hpp"

// Wiener-filter machinery for topology reconstruction: per-node smoothing
// rows (non-causal and causal), one-step Granger prediction, the inverse-PSD
// kin test, the child/parent/co-parent decomposition, edge thresholding and
// measurement-noise robustness bounds.

namespace kintop::wiener {

using cdouble = std::complex<double>;

enum class FilterMode { noncausal, causal, granger };

struct WienerRow {
  int target = 0;
  FilterMode mode = FilterMode::noncausal;
  // One response per source node; entries[target] stays zero except in
  // granger mode, where it carries the self-prediction term.
  std::vector<lti::FrequencyResponse> entries;
  std::vector<double> norms;  // norms[i] = l2_norm(entries[i])

  lti::FrequencyGrid grid() const {
    return entries.empty() ? lti::FrequencyGrid() : entries.front().grid;
  }
};

// W_j(w) = Phi_{x_j, x_I_j}(w) (Phi_{x_I_j}(w) + ridge I)^{-1} per bin.
// Fails loudly on a non-PD bin when ridge is 0, reporting the worst bin and
// its condition number.
WienerRow noncausal_wiener_row(const spectra::SpectralMatrix& S, int j,
                               double ridge = 0.0);

// score(i, j) = l2 norm over bins of (Phi^{-1})_ij.  Zero off-diagonal
// pattern matches the kin pattern of the Wiener rows.
Eigen::MatrixXd inverse_psd_kin_matrix(const spectra::SpectralMatrix& S);

// Ground-truth decomposition W = C + P + K of the smoothing row for node j.
// The auxiliary placeholder process takes the j-th slot of the noise PSD
// with unit power.
struct CkpRows {
  WienerRow child;
  WienerRow parent;
  WienerRow kin;
};
CkpRows ckp_decomposition(const ldg::LdgModel& model,
                          const lti::FrequencyGrid& grid, int j);

// Kin-graph edges whose two Wiener entries both vanish (exact algebraic
// cancellation).  rel_tol is measured against the larger row maximum.
std::vector<graph::Edge> detect_cancellation(const ldg::LdgModel& model,
                                             const lti::FrequencyGrid& grid,
                                             double rel_tol = 1e-7);

struct FactorOptions {
  double factor_tol = 1e-8;   // relative residual of S S* - Phi
  double causal_tol = 1e-6;   // anticausal energy fraction of S and S^{-1}
  int max_iter = 200;
  double alias_tol = 1e-6;    // tap energy allowed beyond m/4 when truncating
};

struct SpectralFactor {
  lti::FrequencyGrid grid;
  int n = 0;
  std::vector<Eigen::MatrixXcd> S;  // S(w) S*(w) = Phi(w), S and S^{-1} causal
  int iterations = 0;
  double residual = 0.0;
};

// Newton iteration on the grid (scalar inputs use the closed cepstral form).
SpectralFactor spectral_factorize(const std::vector<Eigen::MatrixXcd>& phi,
                                  const lti::FrequencyGrid& grid,
                                  const FactorOptions& opts = {});

// W_c(z) = {W_nc(z) S(z)}_C S^{-1}(z) with the truncation done tap-wise.
WienerRow causal_wiener_row(const spectra::SpectralMatrix& S, int j,
                            const FactorOptions& opts = {});

// One-step-ahead causal prediction of x_j from all signals including x_j.
// On strictly causal dynamics the support is {j} + parents(j).
WienerRow granger_row(const spectra::SpectralMatrix& S, int j,
                      const FactorOptions& opts = {});

struct ThresholdRule {
  enum class Kind { absolute, relative, topk };
  Kind kind = Kind::relative;
  double tau = 0.1;
  int k = 2;  // used by topk
};

struct EdgeDecision {
  int i = 0, j = 0;
  double score = 0.0;
  double threshold = 0.0;
  bool accepted = false;  // accepted iff score > threshold
};

struct EdgeDecisions {
  graph::UndirectedGraph g;
  std::vector<EdgeDecision> decisions;
};

// Undirected edge {i,j} is kept when either directional norm clears the
// rule's cutoff; ties at the cutoff are rejected.
EdgeDecisions decide_edges(const std::vector<WienerRow>& rows,
                           const ThresholdRule& rule);

// Per-bin upper bound on ||W-hat_j - W_j|| under additive measurement noise
// with PSD phi_eta; bins failing the precondition report +inf.
std::vector<double> robustness_bound(
    const spectra::SpectralMatrix& S_y,
    const std::vector<Eigen::MatrixXcd>& phi_eta, int j);

// Noise-aware detection: accept {i,j} only where some bin's |W-hat| exceeds
// what a noise PSD bounded by D could explain.  Throws when no bin satisfies
// the precondition for any target.
graph::UndirectedGraph robust_detect(const spectra::SpectralMatrix& S_y,
                                     const std::vector<double>& D,
                                     const std::vector<WienerRow>& rows);

nlohmann::json to_json(const WienerRow& row);
nlohmann::json to_json(const std::vector<EdgeDecision>& decisions);

// n-by-n matrix of entry norms, row = target node.
Eigen::MatrixXd norm_matrix(const std::vector<WienerRow>& rows);
std::string scores_csv(const Eigen::MatrixXd& norms);

}  // namespace kintop::wiener
