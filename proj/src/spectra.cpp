#include "kintop/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>

#include <nlohmann/json.hpp>

#include "kintop/dft.hpp"
#include "kintop/kernels.hpp"

namespace kintop::spectra {

namespace {

std::vector<double> make_window(Window w, std::size_t L) {
  std::vector<double> win(L, 1.0);
  if (w == Window::hann) {
    for (std::size_t t = 0; t < L; ++t)
      win[t] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                    static_cast<double>(t) /
                                    static_cast<double>(L));
  }
  return win;
}

}  // namespace

SpectralMatrix estimate_csd(const ldg::TimeSeriesPanel& panel,
                            const WelchConfig& cfg) {
  const std::size_t L = cfg.segment_length;
  lti::FrequencyGrid grid(L);
  const int n = panel.n;
  if (cfg.overlap < 0.0 || cfg.overlap >= 1.0)
    throw ValidationError("overlap must lie in [0, 1)");
  if (panel.T < static_cast<long>(2 * L))
    throw ValidationError("panel too short: need at least two segments");
  for (double v : panel.data)
    if (!std::isfinite(v))
      throw ValidationError("panel contains non-finite samples");

  const long hop =
      std::max<long>(1, std::lround(static_cast<double>(L) * (1.0 - cfg.overlap)));
  const long K = (panel.T - static_cast<long>(L)) / hop + 1;

  std::vector<double> win = make_window(cfg.window, L);
  double wpow = 0.0;
  for (double w : win) wpow += w * w;

  const std::size_t nb = L / 2 + 1;
  const std::size_t npairs = static_cast<std::size_t>(n) * (n + 1) / 2;
  const std::size_t buf_len = npairs * nb;

  using Buffer = std::vector<cdouble>;

  // Pairwise (binary-counter) reduction over segment periodograms: the
  // combine tree is a function of K alone, never of any schedule.
  std::vector<std::unique_ptr<Buffer>> levels;
  std::vector<double> seg(L);
  std::vector<std::vector<cdouble>> X(n, std::vector<cdouble>(nb));

  for (long s = 0; s < K; ++s) {
    const long start = s * hop;
    for (int j = 0; j < n; ++j) {
      const double* src = panel.channel(j) + start;
      if (cfg.detrend) {
        double mean = 0.0;
        for (std::size_t t = 0; t < L; ++t) mean += src[t];
        mean /= static_cast<double>(L);
        for (std::size_t t = 0; t < L; ++t) seg[t] = src[t] - mean;
        kernels::window_mul(win.data(), seg.data(), seg.data(), L);
      } else {
        kernels::window_mul(win.data(), src, seg.data(), L);
      }
      dft::rfft(seg.data(), X[j].data(), L);
      // Real bins stay exactly real so the assembled matrices are exactly
      // Hermitian at 0 and Nyquist.
      X[j][0] = cdouble(X[j][0].real(), 0.0);
      X[j][nb - 1] = cdouble(X[j][nb - 1].real(), 0.0);
    }
    auto carry = std::make_unique<Buffer>(buf_len);
    std::size_t slot = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j, ++slot)
        kernels::cmul_conj(X[i].data(), X[j].data(),
                           carry->data() + slot * nb, nb);
    std::size_t lvl = 0;
    while (lvl < levels.size() && levels[lvl]) {
      kernels::cadd(carry->data(), levels[lvl]->data(), buf_len);
      levels[lvl].reset();
      ++lvl;
    }
    if (lvl == levels.size()) levels.emplace_back();
    levels[lvl] = std::move(carry);
  }

  Buffer total(buf_len, cdouble(0.0, 0.0));
  for (auto& lvl : levels)
    if (lvl) kernels::cadd(total.data(), lvl->data(), buf_len);

  const double scale = 1.0 / (static_cast<double>(K) * wpow);
  SpectralMatrix S(grid, n);
  std::size_t slot = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j, ++slot) {
      const cdouble* p = total.data() + slot * nb;
      for (std::size_t k = 0; k < nb; ++k) {
        const cdouble v = p[k] * scale;
        S.values[k](i, j) = v;
        if (i != j) S.values[k](j, i) = std::conj(v);
      }
    }
  }
  for (std::size_t k = nb; k < L; ++k)
    S.values[k] = S.values[L - k].conjugate();
  return S;
}

std::vector<double> coherence(const SpectralMatrix& S, int i, int j) {
  std::vector<double> out(S.grid.m);
  for (std::size_t k = 0; k < S.grid.m; ++k) {
    const double di = S.values[k](i, i).real();
    const double dj = S.values[k](j, j).real();
    if (di <= 0.0 || dj <= 0.0)
      throw ValidationError("coherence: zero diagonal at bin " +
                            std::to_string(k));
    double c = std::norm(S.values[k](i, j)) / (di * dj);
    out[k] = std::clamp(c, 0.0, 1.0);
  }
  return out;
}

ConditionReport condition_report(const SpectralMatrix& S) {
  ConditionReport rep;
  rep.cond.resize(S.grid.m);
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < S.grid.m; ++k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S.values[k],
                                                       Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double lo = ev.minCoeff();
    const double hi = ev.maxCoeff();
    rep.cond[k] = (lo <= hi * 1e-15 || hi <= 0.0) ? inf : hi / lo;
  }
  rep.worst_bin = 0;
  rep.worst = rep.cond[0];
  for (std::size_t k = 1; k < S.grid.m; ++k)
    if (rep.cond[k] > rep.worst) {
      rep.worst = rep.cond[k];
      rep.worst_bin = k;
    }
  return rep;
}

void write_csdm(const SpectralMatrix& S, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  const char magic[4] = {'C', 'S', 'D', 'M'};
  const std::uint32_t n = static_cast<std::uint32_t>(S.n);
  const std::uint32_t m = static_cast<std::uint32_t>(S.grid.m);
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&m), 4);
  std::vector<cdouble> row(S.n);
  for (std::size_t k = 0; k < S.grid.m; ++k) {
    for (int i = 0; i < S.n; ++i) {
      for (int j = 0; j < S.n; ++j) row[j] = S.values[k](i, j);
      out.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(sizeof(cdouble) * row.size()));
    }
  }
}

SpectralMatrix read_csdm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  char magic[4];
  std::uint32_t n = 0, m = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&m), 4);
  if (!in || std::memcmp(magic, "CSDM", 4) != 0)
    throw ValidationError("bad CSDM header in " + path);
  SpectralMatrix S(lti::FrequencyGrid(m), static_cast<int>(n));
  std::vector<cdouble> row(n);
  for (std::uint32_t k = 0; k < m; ++k) {
    for (std::uint32_t i = 0; i < n; ++i) {
      in.read(reinterpret_cast<char*>(row.data()),
              static_cast<std::streamsize>(sizeof(cdouble) * row.size()));
      if (!in) throw ValidationError("truncated CSDM file " + path);
      for (std::uint32_t j = 0; j < n; ++j)
        S.values[k](static_cast<int>(i), static_cast<int>(j)) = row[j];
    }
  }
  return S;
}

nlohmann::json to_json(const SpectralMatrix& S) {
  if (S.n > 8)
    throw ValidationError("JSON spectral matrices are limited to n <= 8");
  nlohmann::json bins = nlohmann::json::array();
  for (std::size_t k = 0; k < S.grid.m; ++k) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < S.n; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < S.n; ++j)
        row.push_back({S.values[k](i, j).real(), S.values[k](i, j).imag()});
      rows.push_back(std::move(row));
    }
    bins.push_back(std::move(rows));
  }
  return {{"n", S.n}, {"m", S.grid.m}, {"bins", std::move(bins)}};
}

SpectralMatrix spectral_matrix_from_json(const nlohmann::json& j) {
  SpectralMatrix S(lti::FrequencyGrid(j.at("m").get<std::size_t>()),
                   j.at("n").get<int>());
  const auto& bins = j.at("bins");
  for (std::size_t k = 0; k < S.grid.m; ++k)
    for (int r = 0; r < S.n; ++r)
      for (int c = 0; c < S.n; ++c)
        S.values[k](r, c) = cdouble(bins[k][r][c][0].get<double>(),
                                    bins[k][r][c][1].get<double>());
  return S;
}

}  // namespace kintop::spectra
