#include "kintop/wiener.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kintop/dft.hpp"
#include "kintop/kernels.hpp"

namespace kintop::wiener {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> sources_excluding(int n, int j) {
  std::vector<int> idx;
  idx.reserve(n - 1);
  for (int i = 0; i < n; ++i)
    if (i != j) idx.push_back(i);
  return idx;
}

void check_target(const spectra::SpectralMatrix& S, int j) {
  if (j < 0 || j >= S.n)
    throw ValidationError("target node out of range");
}

double condition_of(const Eigen::MatrixXcd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A,
                                                     Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0.0 || hi <= 0.0) return kInf;
  return hi / lo;
}

[[noreturn]] void throw_singular_bin(const Eigen::MatrixXcd& A,
                                     std::size_t bin) {
  std::ostringstream os;
  os << "spectral matrix is not positive definite at bin " << bin
     << " (condition " << condition_of(A)
     << "); a nonzero ridge regularizes the inversion";
  throw NumericalError(os.str());
}

void fill_norms(WienerRow& row) {
  row.norms.resize(row.entries.size());
  for (std::size_t i = 0; i < row.entries.size(); ++i)
    row.norms[i] = lti::l2_norm(row.entries[i]);
}

// In-place causal part across bins: half lag 0 and the Nyquist lag, keep
// strictly positive lags, drop the rest.
void plus_operator(std::vector<Eigen::MatrixXcd>& G, std::size_t m) {
  const int n = static_cast<int>(G.front().rows());
  std::vector<cdouble> entry(m), taps(m);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      for (std::size_t k = 0; k < m; ++k) entry[k] = G[k](r, c);
      dft::ifft(entry.data(), taps.data(), m);
      taps[0] *= 0.5;
      taps[m / 2] *= 0.5;
      for (std::size_t t = m / 2 + 1; t < m; ++t) taps[t] = cdouble(0.0, 0.0);
      dft::fft(taps.data(), entry.data(), m);
      for (std::size_t k = 0; k < m; ++k) G[k](r, c) = entry[k];
    }
  }
}

double factor_residual(const std::vector<Eigen::MatrixXcd>& S,
                       const std::vector<Eigen::MatrixXcd>& phi) {
  double worst = 0.0;
  for (std::size_t k = 0; k < S.size(); ++k) {
    const double denom = phi[k].norm();
    const double r = (S[k] * S[k].adjoint() - phi[k]).norm();
    worst = std::max(worst, denom > 0.0 ? r / denom : r);
  }
  return worst;
}

double anticausal_fraction_of(const std::vector<Eigen::MatrixXcd>& S,
                              std::size_t m) {
  const int n = static_cast<int>(S.front().rows());
  std::vector<cdouble> entry(m), taps(m);
  double total = 0.0, anti = 0.0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      for (std::size_t k = 0; k < m; ++k) entry[k] = S[k](r, c);
      dft::ifft(entry.data(), taps.data(), m);
      for (std::size_t t = 0; t < m; ++t) {
        const double e = std::norm(taps[t]);
        total += e;
        if (t >= m / 2) anti += e;
      }
    }
  }
  return total > 0.0 ? anti / total : 0.0;
}

SpectralFactor factorize_scalar(const std::vector<Eigen::MatrixXcd>& phi,
                                const lti::FrequencyGrid& grid,
                                const FactorOptions& opts) {
  const std::size_t m = grid.m;
  std::vector<cdouble> logphi(m), ceps(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double v = phi[k](0, 0).real();
    if (v <= 0.0)
      throw NumericalError("scalar spectrum not positive at bin " +
                           std::to_string(k));
    logphi[k] = cdouble(std::log(v), 0.0);
  }
  dft::ifft(logphi.data(), ceps.data(), m);
  ceps[0] *= 0.5;
  ceps[m / 2] *= 0.5;
  for (std::size_t t = m / 2 + 1; t < m; ++t) ceps[t] = cdouble(0.0, 0.0);
  std::vector<cdouble> b(m);
  dft::fft(ceps.data(), b.data(), m);

  SpectralFactor out;
  out.grid = grid;
  out.n = 1;
  out.S.assign(m, Eigen::MatrixXcd(1, 1));
  for (std::size_t k = 0; k < m; ++k) out.S[k](0, 0) = std::exp(b[k]);
  out.iterations = 1;
  out.residual = factor_residual(out.S, phi);
  if (out.residual >= opts.factor_tol)
    throw NumericalError("cepstral factorization residual too large");
  return out;
}

}  // namespace

WienerRow noncausal_wiener_row(const spectra::SpectralMatrix& S, int j,
                               double ridge) {
  check_target(S, j);
  const int n = S.n;
  const std::size_t m = S.grid.m;
  const std::vector<int> idx = sources_excluding(n, j);

  WienerRow row;
  row.target = j;
  row.mode = FilterMode::noncausal;
  row.entries.assign(n, lti::FrequencyResponse(S.grid));

  Eigen::MatrixXcd A(n - 1, n - 1);
  Eigen::VectorXcd bH(n - 1);
  for (std::size_t k = 0; k < m; ++k) {
    A = S.values[k](idx, idx);
    if (ridge != 0.0)
      A += ridge * Eigen::MatrixXcd::Identity(n - 1, n - 1);
    Eigen::LLT<Eigen::MatrixXcd> llt(A);
    if (llt.info() != Eigen::Success) throw_singular_bin(A, k);
    for (int c = 0; c < n - 1; ++c)
      bH(c) = std::conj(S.values[k](j, idx[c]));
    Eigen::VectorXcd y = llt.solve(bH);
    for (int c = 0; c < n - 1; ++c)
      row.entries[idx[c]].values[k] = std::conj(y(c));
  }
  fill_norms(row);
  return row;
}

Eigen::MatrixXd inverse_psd_kin_matrix(const spectra::SpectralMatrix& S) {
  const int n = S.n;
  const std::size_t m = S.grid.m;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < m; ++k) {
    Eigen::LLT<Eigen::MatrixXcd> llt(S.values[k]);
    if (llt.info() != Eigen::Success) throw_singular_bin(S.values[k], k);
    Eigen::MatrixXcd inv = llt.solve(Eigen::MatrixXcd::Identity(n, n));
    acc += inv.cwiseAbs2().real();
  }
  return (acc / static_cast<double>(m)).cwiseSqrt();
}

CkpRows ckp_decomposition(const ldg::LdgModel& model,
                          const lti::FrequencyGrid& grid, int j) {
  model.check_structure();
  const int n = model.n();
  if (j < 0 || j >= n) throw ValidationError("target node out of range");
  const std::size_t m = grid.m;

  std::vector<std::vector<cdouble>> hresp(n * n,
                                          std::vector<cdouble>(m, 0.0));
  for (const auto& [arc, tf] : model.links) {
    lti::FrequencyResponse fr = lti::freq_response(tf, grid);
    hresp[arc.second * n + arc.first] = std::move(fr.values);
  }
  Eigen::MatrixXd psd_e = ldg::noise_psd(model.noise, grid);

  CkpRows out;
  for (WienerRow* r : {&out.child, &out.parent, &out.kin}) {
    r->target = j;
    r->mode = FilterMode::noncausal;
    r->entries.assign(n, lti::FrequencyResponse(grid));
  }

  Eigen::MatrixXcd H(n, n), M(n, n);
  Eigen::VectorXcd hcol(n);
  for (std::size_t k = 0; k < m; ++k) {
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) H(r, c) = hresp[r * n + c][k];
    hcol = H.col(j);
    const double phi_ej = psd_e(k, j);
    M = phi_ej * (hcol * hcol.adjoint());
    for (int i = 0; i < n; ++i)
      M(i, i) += (i == j) ? 1.0 : psd_e(k, i);  // unit placeholder at slot j
    Eigen::LLT<Eigen::MatrixXcd> llt(M);
    if (llt.info() != Eigen::Success)
      throw NumericalError("ill-posed model: child-filter system not PD");
    Eigen::VectorXcd y = llt.solve(hcol);
    Eigen::RowVectorXcd crow = phi_ej * y.adjoint();
    const cdouble s = cdouble(1.0, 0.0) - (crow * hcol)(0, 0);
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      out.child.entries[i].values[k] = crow(i);
      out.parent.entries[i].values[k] = s * H(j, i);
      out.kin.entries[i].values[k] = -(crow * H.col(i))(0, 0);
    }
  }
  fill_norms(out.child);
  fill_norms(out.parent);
  fill_norms(out.kin);
  return out;
}

std::vector<graph::Edge> detect_cancellation(const ldg::LdgModel& model,
                                             const lti::FrequencyGrid& grid,
                                             double rel_tol) {
  spectra::SpectralMatrix S = ldg::analytic_psd(model, grid);
  const int n = model.n();
  std::vector<WienerRow> rows;
  rows.reserve(n);
  for (int j = 0; j < n; ++j) rows.push_back(noncausal_wiener_row(S, j));
  std::vector<double> rowmax(n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      rowmax[j] = std::max(rowmax[j], rows[j].norms[i]);

  std::vector<graph::Edge> flagged;
  graph::UndirectedGraph kin = graph::kin_graph(model.g);
  for (const graph::Edge& e : kin.edges) {
    const int a = e.first, b = e.second;
    if (rows[b].norms[a] < rel_tol * rowmax[b] &&
        rows[a].norms[b] < rel_tol * rowmax[a])
      flagged.push_back(e);
  }
  return flagged;
}

SpectralFactor spectral_factorize(const std::vector<Eigen::MatrixXcd>& phi,
                                  const lti::FrequencyGrid& grid,
                                  const FactorOptions& opts) {
  const std::size_t m = grid.m;
  if (phi.size() != m)
    throw ValidationError("spectrum bin count does not match grid");
  const int n = static_cast<int>(phi.front().rows());
  if (n == 1) return factorize_scalar(phi, grid, opts);

  // Zero-lag covariance Cholesky seeds the iteration.
  Eigen::MatrixXcd C0 = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& p : phi) C0 += p;
  C0 /= static_cast<double>(m);
  C0 = 0.5 * (C0 + C0.adjoint()).eval();
  Eigen::LLT<Eigen::MatrixXcd> llt0(C0);
  if (llt0.info() != Eigen::Success)
    throw NumericalError("zero-lag covariance is not positive definite");
  Eigen::MatrixXcd L = llt0.matrixL();

  SpectralFactor out;
  out.grid = grid;
  out.n = n;
  out.S.assign(m, L);

  std::vector<Eigen::MatrixXcd> G(m, Eigen::MatrixXcd(n, n));
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
  double residual = factor_residual(out.S, phi);
  int iter = 0;
  for (; iter < opts.max_iter && residual >= opts.factor_tol; ++iter) {
    for (std::size_t k = 0; k < m; ++k) {
      Eigen::PartialPivLU<Eigen::MatrixXcd> lu(out.S[k]);
      Eigen::MatrixXcd X = lu.solve(phi[k]);
      G[k] = lu.solve(X.adjoint()).adjoint() + eye;
    }
    plus_operator(G, m);
    for (std::size_t k = 0; k < m; ++k) out.S[k] *= G[k];
    residual = factor_residual(out.S, phi);
  }
  out.iterations = iter;
  out.residual = residual;
  if (residual >= opts.factor_tol) {
    std::ostringstream os;
    os << "spectral factorization did not converge after " << opts.max_iter
       << " iterations (residual " << residual << ")";
    throw NumericalError(os.str());
  }

  if (anticausal_fraction_of(out.S, m) >= opts.causal_tol)
    throw NumericalError(
        "spectral factor is not causal on this grid; increase the grid size");
  std::vector<Eigen::MatrixXcd> Sinv(m);
  for (std::size_t k = 0; k < m; ++k) Sinv[k] = out.S[k].inverse();
  if (anticausal_fraction_of(Sinv, m) >= opts.causal_tol)
    throw NumericalError(
        "inverse spectral factor is not causal on this grid; increase the "
        "grid size");
  return out;
}

namespace {

// {row * S}_C * S^{-1} assembled tap-wise, shared by the causal and granger
// paths.  `row` holds one response per column of S.
std::vector<std::vector<cdouble>> causal_project(
    const std::vector<std::vector<cdouble>>& row, const SpectralFactor& fac,
    const FactorOptions& opts) {
  const std::size_t m = fac.grid.m;
  const int w = fac.n;
  std::vector<std::vector<cdouble>> g(w, std::vector<cdouble>(m, 0.0));
  for (std::size_t k = 0; k < m; ++k)
    for (int c = 0; c < w; ++c)
      for (int a = 0; a < w; ++a) g[c][k] += row[a][k] * fac.S[k](a, c);

  lti::FrequencyGrid grid = fac.grid;
  for (int c = 0; c < w; ++c) {
    lti::FrequencyResponse fr(grid, g[c]);
    if (lti::tail_energy_fraction(fr, m / 4) > opts.alias_tol)
      throw NumericalError(
          "filter taps reach beyond a quarter of the grid; rerun with a "
          "larger grid size");
    g[c] = lti::causal_truncate_response(fr).values;
  }

  std::vector<std::vector<cdouble>> out(w, std::vector<cdouble>(m, 0.0));
  for (std::size_t k = 0; k < m; ++k) {
    Eigen::MatrixXcd Sinv = fac.S[k].inverse();
    for (int c = 0; c < w; ++c) {
      cdouble acc(0.0, 0.0);
      for (int a = 0; a < w; ++a) acc += g[a][k] * Sinv(a, c);
      out[c][k] = acc;
    }
  }
  return out;
}

}  // namespace

WienerRow causal_wiener_row(const spectra::SpectralMatrix& S, int j,
                            const FactorOptions& opts) {
  check_target(S, j);
  const int n = S.n;
  const std::size_t m = S.grid.m;
  const std::vector<int> idx = sources_excluding(n, j);

  std::vector<Eigen::MatrixXcd> sub(m);
  std::vector<std::vector<cdouble>> wnc(n - 1, std::vector<cdouble>(m));
  Eigen::VectorXcd bH(n - 1);
  for (std::size_t k = 0; k < m; ++k) {
    sub[k] = S.values[k](idx, idx);
    Eigen::LLT<Eigen::MatrixXcd> llt(sub[k]);
    if (llt.info() != Eigen::Success) throw_singular_bin(sub[k], k);
    for (int c = 0; c < n - 1; ++c)
      bH(c) = std::conj(S.values[k](j, idx[c]));
    Eigen::VectorXcd y = llt.solve(bH);
    for (int c = 0; c < n - 1; ++c) wnc[c][k] = std::conj(y(c));
  }

  SpectralFactor fac = spectral_factorize(sub, S.grid, opts);
  std::vector<std::vector<cdouble>> wc = causal_project(wnc, fac, opts);

  WienerRow row;
  row.target = j;
  row.mode = FilterMode::causal;
  row.entries.assign(n, lti::FrequencyResponse(S.grid));
  for (int c = 0; c < n - 1; ++c)
    row.entries[idx[c]].values = std::move(wc[c]);
  for (int i = 0; i < n; ++i) {
    if (i == j) continue;
    if (lti::anticausal_energy_fraction(row.entries[i]) >= opts.causal_tol)
      throw NumericalError(
          "causal Wiener entry kept anticausal energy; increase the grid "
          "size");
  }
  fill_norms(row);
  return row;
}

WienerRow granger_row(const spectra::SpectralMatrix& S, int j,
                      const FactorOptions& opts) {
  check_target(S, j);
  const int n = S.n;
  const std::size_t m = S.grid.m;

  SpectralFactor fac = spectral_factorize(S.values, S.grid, opts);

  // One step ahead: z * (row j of the factor), then the causal projection.
  std::vector<std::vector<cdouble>> zrow(n, std::vector<cdouble>(m));
  for (std::size_t k = 0; k < m; ++k) {
    const cdouble z = std::polar(1.0, S.grid.omega(k));
    for (int c = 0; c < n; ++c) zrow[c][k] = z * fac.S[k](j, c);
  }
  std::vector<std::vector<cdouble>> wg = causal_project(zrow, fac, opts);

  WienerRow row;
  row.target = j;
  row.mode = FilterMode::granger;
  row.entries.assign(n, lti::FrequencyResponse(S.grid));
  for (int c = 0; c < n; ++c) row.entries[c].values = std::move(wg[c]);
  fill_norms(row);
  return row;
}

EdgeDecisions decide_edges(const std::vector<WienerRow>& rows,
                           const ThresholdRule& rule) {
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw ValidationError("no rows given");
  lti::FrequencyGrid grid = rows.front().grid();
  for (const WienerRow& r : rows) {
    if (!(r.grid() == grid))
      throw ValidationError("rows live on different grids");
    if (static_cast<int>(r.norms.size()) != n)
      throw ValidationError("row source count does not match row count");
  }

  // Per-row cutoff implied by the rule; pair score is checked against the
  // cutoff of its own row.
  std::vector<double> cut(n, rule.tau);
  if (rule.kind == ThresholdRule::Kind::relative) {
    for (int j = 0; j < n; ++j) {
      double rowmax = 0.0;
      for (int i = 0; i < n; ++i)
        if (i != rows[j].target) rowmax = std::max(rowmax, rows[j].norms[i]);
      cut[j] = rule.tau * rowmax;
    }
  } else if (rule.kind == ThresholdRule::Kind::topk) {
    for (int j = 0; j < n; ++j) {
      std::vector<double> vals;
      for (int i = 0; i < n; ++i)
        if (i != rows[j].target) vals.push_back(rows[j].norms[i]);
      std::sort(vals.begin(), vals.end(), std::greater<double>());
      cut[j] = static_cast<std::size_t>(rule.k) < vals.size()
                   ? vals[rule.k]
                   : 0.0;
    }
  }

  EdgeDecisions out;
  out.g = graph::UndirectedGraph(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v_ji = rows[j].norms[i];  // row j, source i
      const double v_ij = rows[i].norms[j];
      const bool acc_ji = v_ji > cut[j];
      const bool acc_ij = v_ij > cut[i];
      EdgeDecision d;
      d.i = i;
      d.j = j;
      d.accepted = acc_ji || acc_ij;
      // Report the stronger side (among accepting sides when accepted).
      bool pick_ji;
      if (d.accepted)
        pick_ji = acc_ji && (!acc_ij || v_ji >= v_ij);
      else
        pick_ji = v_ji >= v_ij;
      d.score = pick_ji ? v_ji : v_ij;
      d.threshold = pick_ji ? cut[j] : cut[i];
      if (d.accepted) out.g.add_edge(i, j);
      out.decisions.push_back(d);
    }
  }
  return out;
}

std::vector<double> robustness_bound(
    const spectra::SpectralMatrix& S_y,
    const std::vector<Eigen::MatrixXcd>& phi_eta, int j) {
  check_target(S_y, j);
  const int n = S_y.n;
  const std::size_t m = S_y.grid.m;
  if (phi_eta.size() != m)
    throw ValidationError("noise PSD bin count does not match grid");
  const std::vector<int> idx = sources_excluding(n, j);

  std::vector<double> bound(m, kInf);
  for (std::size_t k = 0; k < m; ++k) {
    Eigen::MatrixXcd A = S_y.values[k](idx, idx);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A,
                                                       Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> en(phi_eta[k],
                                                       Eigen::EigenvaluesOnly);
    const double eta = en.eigenvalues().cwiseAbs().maxCoeff();
    if (lmin <= 0.0) continue;  // precondition failed, keep the sentinel
    const double denom = lmin - eta;
    if (denom <= 0.0) continue;
    double bnorm2 = 0.0;
    for (int c = 0; c < n - 1; ++c) bnorm2 += std::norm(S_y.values[k](j, idx[c]));
    bound[k] = std::sqrt(bnorm2) * (1.0 / lmin) * eta / denom;
  }
  return bound;
}

graph::UndirectedGraph robust_detect(const spectra::SpectralMatrix& S_y,
                                     const std::vector<double>& D,
                                     const std::vector<WienerRow>& rows) {
  const int n = S_y.n;
  const std::size_t m = S_y.grid.m;
  if (D.size() != m)
    throw ValidationError("noise bound bin count does not match grid");
  if (static_cast<int>(rows.size()) != n)
    throw ValidationError("need one row per node");

  // cutoff(j, k): the largest |W| a noise PSD below D could explain.
  std::vector<std::vector<double>> cutoff(n, std::vector<double>(m, kInf));
  bool any_valid = false;
  for (int j = 0; j < n; ++j) {
    const std::vector<int> idx = sources_excluding(n, j);
    for (std::size_t k = 0; k < m; ++k) {
      Eigen::MatrixXcd A = S_y.values[k](idx, idx);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
          A, Eigen::EigenvaluesOnly);
      const double lmin = es.eigenvalues().minCoeff();
      if (!(lmin > 0.0) || !(lmin - D[k] > 0.0)) continue;
      double bnorm2 = 0.0;
      for (int c = 0; c < n - 1; ++c)
        bnorm2 += std::norm(S_y.values[k](j, idx[c]));
      cutoff[j][k] = std::sqrt(bnorm2) * D[k] / (lmin - D[k]);
      any_valid = true;
    }
  }
  if (!any_valid)
    throw NumericalError(
        "no bin satisfies the robustness precondition for any node");

  graph::UndirectedGraph out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      bool accept = false;
      for (std::size_t k = 0; k < m && !accept; ++k) {
        if (cutoff[j][k] < kInf &&
            std::abs(rows[j].entries[i].values[k]) > cutoff[j][k])
          accept = true;
        if (cutoff[i][k] < kInf &&
            std::abs(rows[i].entries[j].values[k]) > cutoff[i][k])
          accept = true;
      }
      if (accept) out.add_edge(i, j);
    }
  }
  return out;
}

nlohmann::json to_json(const WienerRow& row) {
  nlohmann::json entries = nlohmann::json::array();
  const int n = static_cast<int>(row.entries.size());
  for (int i = 0; i < n; ++i) {
    if (i == row.target && row.mode != FilterMode::granger) continue;
    nlohmann::json vals = nlohmann::json::array();
    for (const cdouble& v : row.entries[i].values)
      vals.push_back({v.real(), v.imag()});
    entries.push_back(
        {{"source", i}, {"norm", row.norms[i]}, {"values", std::move(vals)}});
  }
  const char* mode = row.mode == FilterMode::noncausal ? "noncausal"
                     : row.mode == FilterMode::causal  ? "causal"
                                                       : "granger";
  return {{"target", row.target},
          {"mode", mode},
          {"m", row.grid().m},
          {"entries", std::move(entries)}};
}

nlohmann::json to_json(const std::vector<EdgeDecision>& decisions) {
  nlohmann::json arr = nlohmann::json::array();
  for (const EdgeDecision& d : decisions)
    arr.push_back({{"i", d.i},
                   {"j", d.j},
                   {"score", d.score},
                   {"threshold", d.threshold},
                   {"accepted", d.accepted}});
  return arr;
}

Eigen::MatrixXd norm_matrix(const std::vector<WienerRow>& rows) {
  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out(rows[j].target, i) = rows[j].norms[i];
  return out;
}

std::string scores_csv(const Eigen::MatrixXd& norms) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index r = 0; r < norms.rows(); ++r) {
    for (Eigen::Index c = 0; c < norms.cols(); ++c) {
      if (c) os << ',';
      os << norms(r, c);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace kintop::wiener
