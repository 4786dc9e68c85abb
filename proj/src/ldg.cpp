#include "kintop/ldg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kintop/dft.hpp"

namespace kintop::ldg {

using cdouble = std::complex<double>;

namespace {

constexpr double kWellPosedTol = 1e-8;
constexpr double kShapingZeroTol = 1e-8;
constexpr double kAnticausalTol = 1e-6;
constexpr double kDivergenceLimit = 1e9;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// One independent engine per (seed, stream); streams never overlap between
// process and measurement noise.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(seed * 0x2545F4914F6CDD1DULL + stream));
}

std::vector<double> draw_innovations(std::mt19937_64& eng, Innovations kind,
                                     std::size_t count) {
  std::vector<double> w(count);
  if (kind == Innovations::gaussian) {
    std::normal_distribution<double> dist(0.0, 1.0);
    for (double& v : w) v = dist(eng);
  } else {
    // Unit-variance uniform innovations.
    const double half = std::sqrt(3.0);
    std::uniform_real_distribution<double> dist(-half, half);
    for (double& v : w) v = dist(eng);
  }
  return w;
}

// Frequency response of every link, evaluated once per grid.
std::map<graph::Edge, lti::FrequencyResponse> link_responses(
    const LdgModel& model, const lti::FrequencyGrid& grid) {
  std::map<graph::Edge, lti::FrequencyResponse> out;
  for (const auto& [arc, tf] : model.links)
    out.emplace(arc, lti::freq_response(tf, grid));
  return out;
}

Eigen::MatrixXcd h_matrix_at(
    const std::map<graph::Edge, lti::FrequencyResponse>& resp, int n,
    std::size_t k) {
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [arc, fr] : resp) H(arc.second, arc.first) = fr.values[k];
  return H;
}

}  // namespace

const lti::TransferFunction& LdgModel::link(int from, int to) const {
  auto it = links.find({from, to});
  if (it == links.end())
    throw ValidationError("missing transfer function for arc " +
                          std::to_string(from) + "->" + std::to_string(to));
  return it->second;
}

void LdgModel::add_link(int from, int to, lti::TransferFunction tf) {
  g.add_edge(from, to);
  links[{from, to}] = std::move(tf);
}

void LdgModel::check_structure() const {
  graph::check_no_antiparallel(g);
  for (const graph::Edge& arc : g.edges) {
    auto it = links.find(arc);
    if (it == links.end())
      throw ValidationError("arc " + std::to_string(arc.first) + "->" +
                            std::to_string(arc.second) +
                            " has no transfer function");
    if (it->second.is_zero())
      throw ValidationError("arc " + std::to_string(arc.first) + "->" +
                            std::to_string(arc.second) +
                            " carries the zero transfer function");
  }
  for (const auto& [arc, tf] : links)
    if (!g.edges.count(arc))
      throw ValidationError("transfer function without a matching arc");
  if (static_cast<int>(noise.size()) != g.n)
    throw ValidationError("noise spec count does not match node count");
  for (const NoiseSpec& spec : noise) {
    if (spec.variance <= 0.0)
      throw ValidationError("noise variance must be positive");
    if (spec.shaping.is_zero() || !spec.shaping.is_causal())
      throw ValidationError("noise shaping must be causal and nonzero");
  }
  if (measurement_noise) {
    if (static_cast<int>(measurement_noise->size()) != g.n)
      throw ValidationError("measurement noise count does not match nodes");
    for (const NoiseSpec& spec : *measurement_noise) {
      if (spec.variance <= 0.0)
        throw ValidationError("measurement noise variance must be positive");
      if (spec.shaping.is_zero() || !spec.shaping.is_causal())
        throw ValidationError("measurement shaping must be causal, nonzero");
    }
  }
}

Eigen::MatrixXd noise_psd(const std::vector<NoiseSpec>& specs,
                          const lti::FrequencyGrid& grid) {
  Eigen::MatrixXd psd(grid.m, specs.size());
  for (std::size_t j = 0; j < specs.size(); ++j) {
    lti::FrequencyResponse fr = lti::freq_response(specs[j].shaping, grid);
    for (std::size_t k = 0; k < grid.m; ++k)
      psd(k, j) = specs[j].variance * std::norm(fr.values[k]);
  }
  return psd;
}

ValidationCertificate validate(const LdgModel& model,
                               const lti::FrequencyGrid& grid) {
  model.check_structure();
  const int n = model.n();
  auto resp = link_responses(model, grid);

  ValidationCertificate cert;
  cert.min_det = std::numeric_limits<double>::infinity();
  if (n == 0) {
    cert.min_det = 1.0;
  }

  bool links_causal = true, links_strict = true;
  for (const auto& [arc, tf] : model.links) {
    links_causal = links_causal && tf.is_causal();
    links_strict = links_strict && tf.is_strictly_causal();
  }

  std::vector<Eigen::MatrixXcd> T(grid.m);
  bool invertible = true;
  for (std::size_t k = 0; k < grid.m; ++k) {
    Eigen::MatrixXcd A =
        Eigen::MatrixXcd::Identity(n, n) - h_matrix_at(resp, n, k);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const double adet = std::abs(lu.determinant());
    cert.min_det = std::min(cert.min_det, adet);
    if (adet <= kWellPosedTol) {
      invertible = false;
      continue;
    }
    T[k] = lu.solve(Eigen::MatrixXcd::Identity(n, n));
  }
  cert.well_posed = invertible && cert.min_det > kWellPosedTol;

  cert.detectable = true;
  for (int j = 0; j < n; ++j) {
    lti::FrequencyResponse fr =
        lti::freq_response(model.noise[j].shaping, grid);
    double min_mag = std::numeric_limits<double>::infinity();
    for (const auto& v : fr.values) min_mag = std::min(min_mag, std::abs(v));
    if (min_mag <= kShapingZeroTol) cert.detectable = false;
  }

  // Causal: causal links and a decaying causal closed loop.
  cert.causal = links_causal && cert.well_posed;
  if (cert.causal && n > 0) {
    double total = 0.0, anti = 0.0;
    std::vector<std::complex<double>> entry(grid.m), taps(grid.m);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        for (std::size_t k = 0; k < grid.m; ++k) entry[k] = T[k](r, c);
        dft::ifft(entry.data(), taps.data(), grid.m);
        for (std::size_t t = 0; t < grid.m; ++t) {
          const double e = std::norm(taps[t]);
          total += e;
          if (t >= grid.m / 2) anti += e;
        }
      }
    }
    if (total > 0.0 && anti / total >= kAnticausalTol) cert.causal = false;
  }
  cert.strictly_causal = cert.causal && links_strict;
  return cert;
}

spectra::SpectralMatrix analytic_psd(const LdgModel& model,
                                     const lti::FrequencyGrid& grid) {
  model.check_structure();
  const int n = model.n();
  auto resp = link_responses(model, grid);
  Eigen::MatrixXd psd_e = noise_psd(model.noise, grid);

  spectra::SpectralMatrix S(grid, n);
  const std::size_t m = grid.m;
  for (std::size_t k = 0; k <= m / 2; ++k) {
    Eigen::MatrixXcd A =
        Eigen::MatrixXcd::Identity(n, n) - h_matrix_at(resp, n, k);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    if (std::abs(lu.determinant()) <= kWellPosedTol)
      throw NumericalError("I - H is singular at bin " + std::to_string(k));
    Eigen::MatrixXcd T = lu.solve(Eigen::MatrixXcd::Identity(n, n));
    Eigen::MatrixXcd phi =
        T * psd_e.row(k).asDiagonal().toDenseMatrix().cast<cdouble>() *
        T.adjoint();
    phi = 0.5 * (phi + phi.adjoint()).eval();  // pin exact Hermitian symmetry
    if (k == 0 || k == m / 2) phi = phi.real().cast<cdouble>().eval();
    S.values[k] = phi;
  }
  for (std::size_t k = m / 2 + 1; k < m; ++k)
    S.values[k] = S.values[m - k].conjugate();  // elementwise, no transpose
  return S;
}

spectra::SpectralMatrix analytic_output_psd(const LdgModel& model,
                                            const lti::FrequencyGrid& grid) {
  if (!model.measurement_noise)
    throw ValidationError("model has no measurement noise spec");
  spectra::SpectralMatrix S = analytic_psd(model, grid);
  Eigen::MatrixXd psd_eta = noise_psd(*model.measurement_noise, grid);
  for (std::size_t k = 0; k < grid.m; ++k)
    S.values[k] += psd_eta.row(k).asDiagonal().toDenseMatrix().cast<cdouble>();
  return S;
}

namespace {

struct LagTap {
  int from, to;
  long lag;
  double coeff;
};

// e_j = sqrt(var) * shaping(z) w_j with a per-node white stream.
std::vector<double> shaped_noise(const NoiseSpec& spec, long len,
                                 std::mt19937_64 eng, Innovations kind) {
  const auto& taps = spec.shaping.taps();
  const long off = spec.shaping.offset();
  const long extra = off + static_cast<long>(taps.size());
  std::vector<double> w =
      draw_innovations(eng, kind, static_cast<std::size_t>(len + extra));
  std::vector<double> e(len, 0.0);
  const double scale = std::sqrt(spec.variance);
  for (long t = 0; t < len; ++t) {
    double acc = 0.0;
    for (std::size_t s = 0; s < taps.size(); ++s)
      acc += taps[s] * w[static_cast<std::size_t>(t + extra - off -
                                                  static_cast<long>(s))];
    e[t] = scale * acc;
  }
  return e;
}

}  // namespace

TimeSeriesPanel simulate(const LdgModel& model, long T, std::uint64_t seed) {
  model.check_structure();
  if (T <= 0) throw ValidationError("sample count must be positive");
  const int n = model.n();

  long max_support = 0;
  std::vector<LagTap> lag_taps;
  Eigen::MatrixXd H0 = Eigen::MatrixXd::Zero(n, n);
  bool has_feedthrough = false;
  for (const auto& [arc, tf] : model.links) {
    if (!tf.is_causal())
      throw ValidationError(
          "time-domain simulation requires causal links; use the analytic "
          "PSD path for non-causal models");
    const auto& taps = tf.taps();
    for (std::size_t s = 0; s < taps.size(); ++s) {
      const long lag = tf.offset() + static_cast<long>(s);
      if (taps[s] == 0.0) continue;
      if (lag == 0) {
        H0(arc.second, arc.first) = taps[s];
        has_feedthrough = true;
      } else {
        lag_taps.push_back({arc.first, arc.second, lag, taps[s]});
      }
      max_support = std::max(max_support, lag);
    }
  }
  for (const NoiseSpec& spec : model.noise)
    max_support = std::max(max_support, spec.shaping.max_power());

  const long burn = std::max<long>(500, 10 * max_support);
  const long total = T + burn;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  if (has_feedthrough) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - H0;
    lu.compute(A);
    if (std::abs(lu.determinant()) < 1e-12)
      throw NumericalError("algebraic loop: I - H_0 is singular");
  }

  std::vector<std::vector<double>> e(n);
  for (int j = 0; j < n; ++j)
    e[j] = shaped_noise(model.noise[j], total,
                        make_stream(seed, static_cast<std::uint64_t>(j)),
                        model.innovations);

  std::vector<std::vector<double>> x(n, std::vector<double>(total, 0.0));
  Eigen::VectorXd acc(n);
  for (long t = 0; t < total; ++t) {
    for (int j = 0; j < n; ++j) acc[j] = e[j][t];
    for (const LagTap& lt : lag_taps)
      if (t >= lt.lag) acc[lt.to] += lt.coeff * x[lt.from][t - lt.lag];
    if (has_feedthrough) {
      Eigen::VectorXd sol = lu.solve(acc);
      for (int j = 0; j < n; ++j) x[j][t] = sol[j];
    } else {
      for (int j = 0; j < n; ++j) x[j][t] = acc[j];
    }
    for (int j = 0; j < n; ++j)
      if (!std::isfinite(x[j][t]) || std::abs(x[j][t]) > kDivergenceLimit)
        throw NumericalError("simulation diverged at t=" + std::to_string(t));
  }

  TimeSeriesPanel panel(n, T, seed);
  for (int j = 0; j < n; ++j)
    std::copy(x[j].begin() + burn, x[j].end(), panel.data.begin() + j * T);
  return panel;
}

TimeSeriesPanel corrupt(const TimeSeriesPanel& panel, const LdgModel& model,
                        std::uint64_t seed) {
  if (!model.measurement_noise)
    throw ValidationError("model has no measurement noise spec");
  if (panel.n != model.n())
    throw ValidationError("panel and model disagree on channel count");
  TimeSeriesPanel out = panel;
  out.seed = seed;
  for (int j = 0; j < panel.n; ++j) {
    std::vector<double> eta = shaped_noise(
        (*model.measurement_noise)[j], panel.T,
        make_stream(seed, 0x4D454153ULL + static_cast<std::uint64_t>(j)),
        model.innovations);
    for (long t = 0; t < panel.T; ++t) out.at(j, t) += eta[t];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json to_json(const LdgModel& model) {
  nlohmann::json j;
  j["n"] = model.n();
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [arc, tf] : model.links)
    edges.push_back({{"from", arc.first},
                     {"to", arc.second},
                     {"tf", lti::tf_to_json(tf)}});
  j["edges"] = std::move(edges);
  nlohmann::json noise = nlohmann::json::array();
  for (const NoiseSpec& spec : model.noise)
    noise.push_back({{"shaping", lti::tf_to_json(spec.shaping)},
                     {"variance", spec.variance}});
  j["noise"] = std::move(noise);
  if (model.measurement_noise) {
    nlohmann::json mn = nlohmann::json::array();
    for (const NoiseSpec& spec : *model.measurement_noise)
      mn.push_back({{"shaping", lti::tf_to_json(spec.shaping)},
                    {"variance", spec.variance}});
    j["measurement_noise"] = std::move(mn);
  }
  if (model.innovations == Innovations::uniform) j["innovations"] = "uniform";
  return j;
}

namespace {

std::vector<NoiseSpec> noise_from_json(const nlohmann::json& arr,
                                       std::size_t max_taps) {
  std::vector<NoiseSpec> out;
  for (const auto& item : arr) {
    NoiseSpec spec;
    if (item.contains("shaping"))
      spec.shaping = lti::tf_from_json(item.at("shaping"), max_taps);
    spec.variance = item.value("variance", 1.0);
    out.push_back(std::move(spec));
  }
  return out;
}

}  // namespace

LdgModel model_from_json(const nlohmann::json& j) {
  LdgModel model;
  const int n = j.at("n").get<int>();
  const std::size_t max_taps = j.value("expansion_taps", std::size_t{64});
  model.g = graph::DirectedGraph(n);
  for (const auto& e : j.at("edges")) {
    model.add_link(e.at("from").get<int>(), e.at("to").get<int>(),
                   lti::tf_from_json(e.at("tf"), max_taps));
  }
  if (j.contains("noise")) {
    model.noise = noise_from_json(j.at("noise"), max_taps);
  } else {
    model.noise.assign(n, NoiseSpec{});
  }
  if (j.contains("measurement_noise"))
    model.measurement_noise =
        noise_from_json(j.at("measurement_noise"), max_taps);
  if (j.value("innovations", std::string("gaussian")) == "uniform")
    model.innovations = Innovations::uniform;
  model.check_structure();
  return model;
}

LdgModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file " + path);
  nlohmann::json j;
  in >> j;
  return model_from_json(j);
}

void save_model(const LdgModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write model file " + path);
  out << to_json(model).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Panel IO

void write_panel_csv(const TimeSeriesPanel& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write panel file " + path);
  out.precision(17);
  for (int j = 0; j < p.n; ++j) out << (j ? "," : "") << 'x' << j;
  out << '\n';
  for (long t = 0; t < p.T; ++t) {
    for (int j = 0; j < p.n; ++j) {
      if (j) out << ',';
      out << p.at(j, t);
    }
    out << '\n';
  }
}

TimeSeriesPanel read_panel_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open panel file " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError("panel file is empty: " + path);
  int n = line.empty() ? 0 : 1;
  for (char c : line) n += (c == ',');
  std::vector<double> samples;
  long T = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    int col = 0;
    while (std::getline(ss, tok, ',')) {
      samples.push_back(std::stod(tok));
      ++col;
    }
    if (col != n) throw ValidationError("ragged row in panel file " + path);
    ++T;
  }
  TimeSeriesPanel p(n, T, 0);
  for (long t = 0; t < T; ++t)
    for (int j = 0; j < n; ++j) p.at(j, t) = samples[t * n + j];
  return p;
}

void write_panel_bin(const TimeSeriesPanel& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write panel file " + path);
  const char magic[4] = {'L', 'D', 'G', 'P'};
  const std::uint32_t n = static_cast<std::uint32_t>(p.n);
  const std::uint32_t T = static_cast<std::uint32_t>(p.T);
  const std::uint32_t reserved = 0;
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&T), 4);
  out.write(reinterpret_cast<const char*>(&reserved), 4);
  // Frames: all channels at t, then t+1, ...
  std::vector<double> frame(p.n);
  for (long t = 0; t < p.T; ++t) {
    for (int j = 0; j < p.n; ++j) frame[j] = p.at(j, t);
    out.write(reinterpret_cast<const char*>(frame.data()),
              static_cast<std::streamsize>(sizeof(double) * frame.size()));
  }
}

TimeSeriesPanel read_panel_bin(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open panel file " + path);
  char magic[4];
  std::uint32_t n = 0, T = 0, reserved = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&T), 4);
  in.read(reinterpret_cast<char*>(&reserved), 4);
  if (!in || std::memcmp(magic, "LDGP", 4) != 0)
    throw ValidationError("bad panel header in " + path);
  TimeSeriesPanel p(static_cast<int>(n), static_cast<long>(T), 0);
  std::vector<double> frame(n);
  for (std::uint32_t t = 0; t < T; ++t) {
    in.read(reinterpret_cast<char*>(frame.data()),
            static_cast<std::streamsize>(sizeof(double) * n));
    if (!in) throw ValidationError("truncated panel file " + path);
    for (std::uint32_t j = 0; j < n; ++j) p.at(static_cast<int>(j), t) = frame[j];
  }
  return p;
}

namespace {
bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}
}  // namespace

void write_panel(const TimeSeriesPanel& p, const std::string& path) {
  if (ends_with(path, ".csv")) return write_panel_csv(p, path);
  if (ends_with(path, ".bin")) return write_panel_bin(p, path);
  throw ValidationError("panel path must end in .csv or .bin: " + path);
}

TimeSeriesPanel read_panel(const std::string& path) {
  if (ends_with(path, ".csv")) return read_panel_csv(path);
  if (ends_with(path, ".bin")) return read_panel_bin(path);
  throw ValidationError("panel path must end in .csv or .bin: " + path);
}

}  // namespace kintop::ldg
