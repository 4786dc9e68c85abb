#include "kintop/modelgen.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace kintop::modelgen {

namespace {

using lti::TransferFunction;

double max_gain_on_circle(const TransferFunction& tf) {
  // 512 samples comfortably resolve the short FIR links drawn here.
  lti::FrequencyResponse fr = lti::freq_response(tf, lti::FrequencyGrid(512));
  double mx = 0.0;
  for (const auto& v : fr.values) mx = std::max(mx, std::abs(v));
  return mx;
}

TransferFunction draw_link(std::mt19937_64& rng, const GenParams& p) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_real_distribution<double> strength(0.75, 1.0);
  const long first = p.strictly_causal ? 1 : 0;
  const int taps_len = p.fir_order + (p.strictly_causal ? 0 : 1);
  std::vector<double> taps(std::max(taps_len, 1));
  for (;;) {
    for (double& t : taps) t = coeff(rng);
    TransferFunction tf(taps, first);
    if (tf.is_zero()) continue;
    const double mx = max_gain_on_circle(tf);
    if (mx < 1e-3) continue;
    return tf.scaled(strength(rng) * p.gain / mx);
  }
}

std::vector<ldg::NoiseSpec> draw_noise(std::mt19937_64& rng, int n,
                                       const GenParams& p) {
  std::uniform_real_distribution<double> var(0.5, 2.0);
  std::uniform_real_distribution<double> ma(-0.5, 0.5);
  std::vector<ldg::NoiseSpec> out(n);
  for (ldg::NoiseSpec& spec : out) {
    spec.variance = p.varied_noise ? p.noise_variance * var(rng)
                                   : p.noise_variance;
    if (p.shaped_noise)
      spec.shaping = TransferFunction({1.0, ma(rng)}, 0);
  }
  return out;
}

// Scale every link down when the assembled loop matrix is not a contraction
// on the circle.
void cap_loop_gain(ldg::LdgModel& model, double gain) {
  lti::FrequencyGrid grid(256);
  const int n = model.n();
  std::map<graph::Edge, lti::FrequencyResponse> resp;
  for (const auto& [arc, tf] : model.links)
    resp.emplace(arc, lti::freq_response(tf, grid));
  double worst = 0.0;
  Eigen::MatrixXcd H(n, n);
  for (std::size_t k = 0; k < grid.m; ++k) {
    H.setZero();
    for (const auto& [arc, fr] : resp) H(arc.second, arc.first) = fr.values[k];
    worst = std::max(worst, H.operatorNorm());
  }
  if (worst > gain) {
    const double s = gain / worst;
    for (auto& [arc, tf] : model.links) tf = tf.scaled(s);
  }
}

ldg::LdgModel build_once(const std::string& kind, const GenParams& p,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ldg::LdgModel model;

  auto chain = [&](std::initializer_list<graph::Edge> arcs, int nodes) {
    model.g = graph::DirectedGraph(nodes);
    for (const graph::Edge& a : arcs)
      model.add_link(a.first, a.second, draw_link(rng, p));
  };

  if (kind == "ring") {
    model.g = graph::DirectedGraph(p.n);
    for (int i = 0; i < p.n; ++i)
      model.add_link(i, (i + 1) % p.n, draw_link(rng, p));
  } else if (kind == "tree") {
    model.g = graph::DirectedGraph(p.n);
    for (int i = 1; i < p.n; ++i) {
      std::uniform_int_distribution<int> pick(0, i - 1);
      model.add_link(pick(rng), i, draw_link(rng, p));
    }
  } else if (kind == "random" || kind == "net24") {
    const int n = kind == "net24" ? 24 : p.n;
    const double density = kind == "net24" ? 1.4 / 23.0 : p.density;
    model.g = graph::DirectedGraph(n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j || model.g.has_edge(j, i) || model.g.has_edge(i, j))
          continue;
        if (u(rng) < density) model.add_link(i, j, draw_link(rng, p));
      }
    if (model.g.edges.empty())
      throw ValidationError("generated graph has no edges");
  } else if (kind == "example-2-1") {
    chain({{3, 2}, {2, 1}, {1, 0}}, 4);
  } else if (kind == "example-2-2") {
    chain({{0, 1}, {1, 2}, {2, 3}}, 4);
  } else if (kind == "example-2-3") {
    chain({{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 4);
  } else if (kind == "example-2-4") {
    chain({{0, 2}, {1, 2}, {2, 3}}, 4);
  } else {
    throw ValidationError("unknown model kind: " + kind);
  }

  model.noise = draw_noise(rng, model.n(), p);
  if (p.meas_variance > 0.0) {
    std::vector<ldg::NoiseSpec> mn(model.n());
    for (ldg::NoiseSpec& spec : mn) spec.variance = p.meas_variance;
    model.measurement_noise = std::move(mn);
  }
  cap_loop_gain(model, p.gain);
  return model;
}

}  // namespace

ldg::LdgModel gen_model(const std::string& kind, const GenParams& params) {
  std::string reason;
  for (int attempt = 0; attempt < 20; ++attempt) {
    const std::uint64_t seed =
        params.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt);
    ldg::LdgModel model;
    try {
      model = build_once(kind, params, seed);
    } catch (const ValidationError& e) {
      reason = e.what();
      continue;
    }
    ldg::ValidationCertificate cert = ldg::validate(model);
    if (!cert.well_posed || !cert.detectable) {
      reason = "generated model failed validation";
      continue;
    }
    if (kind == "net24" && graph::is_self_kin(model.g)) {
      reason = "net24 draw came out self-kin";
      continue;
    }
    return model;
  }
  throw ValidationError("could not generate a valid '" + kind +
                        "' model in 20 attempts: " + reason);
}

}  // namespace kintop::modelgen
