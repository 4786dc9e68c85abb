#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include <nlohmann/json.hpp>

#include "kintop/ldg.hpp"
#include "kintop/modelgen.hpp"
#include "kintop/spectra.hpp"
#include "test_util.hpp"

using namespace kintop;
using spectra::SpectralMatrix;
using spectra::WelchConfig;
using cdouble = std::complex<double>;

namespace {

ldg::TimeSeriesPanel white_panel(int n, long T, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  ldg::TimeSeriesPanel p(n, T, seed);
  for (double& v : p.data) v = g(rng);
  return p;
}

}  // namespace

TEST_CASE("white channel gives a flat unit diagonal") {
  auto p = white_panel(1, 100000, 1);
  auto S = spectra::estimate_csd(p, WelchConfig{});
  for (std::size_t k = 0; k < S.grid.m; ++k) {
    CHECK(S.values[k](0, 0).real() > 0.9);
    CHECK(S.values[k](0, 0).real() < 1.1);
    CHECK(S.values[k](0, 0).imag() == 0.0);
  }
}

TEST_CASE("independent channels have low coherence") {
  auto p = white_panel(2, 100000, 2);
  auto S = spectra::estimate_csd(p, WelchConfig{});
  auto coh = spectra::coherence(S, 0, 1);
  double mean = 0.0;
  for (double c : coh) mean += c;
  mean /= static_cast<double>(coh.size());
  CHECK(mean < 0.1);
}

TEST_CASE("duplicated channel is singular at every bin") {
  auto one = white_panel(1, 4096, 3);
  ldg::TimeSeriesPanel p(2, one.T, 3);
  for (long t = 0; t < one.T; ++t) {
    p.at(0, t) = one.at(0, t);
    p.at(1, t) = one.at(0, t);
  }
  auto S = spectra::estimate_csd(p, WelchConfig{});
  for (std::size_t k = 0; k < S.grid.m; ++k) {
    const double tr = S.values[k].trace().real();
    CHECK(std::abs(S.values[k].determinant()) < 1e-6 * tr * tr);
  }
  auto rep = spectra::condition_report(S);
  CHECK(std::isinf(rep.worst));
}

TEST_CASE("estimator output satisfies the matrix invariants exactly") {
  auto model = modelgen::gen_model(
      "random", {.n = 4, .fir_order = 2, .density = 0.4, .seed = 11});
  auto panel = ldg::simulate(model, 20000, 4);
  auto S = spectra::estimate_csd(panel, WelchConfig{});
  const std::size_t m = S.grid.m;
  for (std::size_t k = 0; k < m; ++k) {
    CHECK((S.values[k] - S.values[k].adjoint()).norm() == 0.0);
    for (int i = 0; i < S.n; ++i) {
      CHECK(S.values[k](i, i).imag() == 0.0);
      CHECK(S.values[k](i, i).real() >= 0.0);
    }
  }
  for (std::size_t k = 1; k < m / 2; ++k)
    CHECK((S.values[m - k] - S.values[k].conjugate()).norm() == 0.0);
}

TEST_CASE("estimation is deterministic") {
  auto p = white_panel(3, 10000, 8);
  auto a = spectra::estimate_csd(p, WelchConfig{});
  auto b = spectra::estimate_csd(p, WelchConfig{});
  for (std::size_t k = 0; k < a.grid.m; ++k)
    CHECK(a.values[k] == b.values[k]);
}

TEST_CASE("parseval: mean psd equals the sample variance") {
  auto model = modelgen::gen_model(
      "random", {.n = 2, .fir_order = 2, .density = 0.6, .seed = 12});
  auto panel = ldg::simulate(model, 100000, 13);
  auto S = spectra::estimate_csd(panel, WelchConfig{});
  for (int j = 0; j < panel.n; ++j) {
    double mean = 0.0;
    for (long t = 0; t < panel.T; ++t) mean += panel.at(j, t);
    mean /= static_cast<double>(panel.T);
    double var = 0.0;
    for (long t = 0; t < panel.T; ++t) {
      const double d = panel.at(j, t) - mean;
      var += d * d;
    }
    var /= static_cast<double>(panel.T);
    double psd_mean = 0.0;
    for (std::size_t k = 0; k < S.grid.m; ++k)
      psd_mean += S.values[k](j, j).real();
    psd_mean /= static_cast<double>(S.grid.m);
    CHECK(testutil::rel_err(psd_mean, var) < 0.05);
  }
}

TEST_CASE("coherence basics") {
  auto model = modelgen::gen_model(
      "random", {.n = 2, .fir_order = 2, .density = 0.9, .seed = 14});
  auto panel = ldg::simulate(model, 50000, 15);
  auto S = spectra::estimate_csd(panel, WelchConfig{});
  auto self = spectra::coherence(S, 0, 0);
  for (double c : self) CHECK(c == doctest::Approx(1.0));
}

TEST_CASE("filtered copy has coherence near one") {
  // y = h * x with no extra noise: rank-1 spectrum, coherence 1.
  auto x = white_panel(1, 60000, 16);
  ldg::TimeSeriesPanel p(2, x.T, 16);
  const double h[3] = {1.0, 0.5, -0.25};
  for (long t = 0; t < x.T; ++t) {
    p.at(0, t) = x.at(0, t);
    double acc = 0.0;
    for (int s = 0; s < 3; ++s)
      if (t >= s) acc += h[s] * x.at(0, t - s);
    p.at(1, t) = acc;
  }
  auto S = spectra::estimate_csd(p, WelchConfig{});
  auto coh = spectra::coherence(S, 0, 1);
  double mean = 0.0;
  for (double c : coh) mean += c;
  mean /= static_cast<double>(coh.size());
  CHECK(mean > 0.95);
}

TEST_CASE("condition report basics") {
  SpectralMatrix S(lti::FrequencyGrid(4), 2);
  for (auto& M : S.values) M = Eigen::MatrixXcd::Identity(2, 2);
  auto rep = spectra::condition_report(S);
  for (double c : rep.cond) CHECK(c == doctest::Approx(1.0));

  S.values[1] = Eigen::Vector2cd(1.0, 4.0).asDiagonal();
  S.values[2] << 1.0, 1.0, 1.0, 1.0;  // rank deficient
  rep = spectra::condition_report(S);
  CHECK(rep.cond[1] == doctest::Approx(4.0));
  CHECK(std::isinf(rep.cond[2]));
  CHECK(rep.worst_bin == 2);
}

TEST_CASE("consistency improves with sample count") {
  auto model = modelgen::gen_model(
      "random", {.n = 3, .fir_order = 2, .density = 0.5, .seed = 18});
  auto ref = ldg::analytic_psd(model, lti::FrequencyGrid(256));
  double prev = 1e9;
  for (long T : {2000L, 20000L, 200000L}) {
    auto panel = ldg::simulate(model, T, 19);
    auto est = spectra::estimate_csd(panel, WelchConfig{});
    double err = 0.0;
    for (std::size_t k = 0; k < est.grid.m; ++k)
      err += (est.values[k] - ref.values[k]).norm() / ref.values[k].norm();
    err /= static_cast<double>(est.grid.m);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("two disjoint windows estimate the same spectrum") {
  auto model = modelgen::gen_model(
      "random", {.n = 3, .fir_order = 2, .density = 0.5, .seed = 22});
  auto panel = ldg::simulate(model, 120000, 23);
  const long half = panel.T / 2;
  ldg::TimeSeriesPanel a(panel.n, half, 0), b(panel.n, half, 0);
  for (int j = 0; j < panel.n; ++j)
    for (long t = 0; t < half; ++t) {
      a.at(j, t) = panel.at(j, t);
      b.at(j, t) = panel.at(j, t + half);
    }
  auto Sa = spectra::estimate_csd(a, WelchConfig{});
  auto Sb = spectra::estimate_csd(b, WelchConfig{});
  double err = 0.0;
  for (std::size_t k = 0; k < Sa.grid.m; ++k)
    err += (Sa.values[k] - Sb.values[k]).norm() / Sa.values[k].norm();
  err /= static_cast<double>(Sa.grid.m);
  CHECK(err < 0.2);
}

TEST_CASE("panel too short is rejected") {
  auto p = white_panel(2, 300, 30);
  CHECK_THROWS_AS(spectra::estimate_csd(p, WelchConfig{}), ValidationError);
  p.data[5] = std::numeric_limits<double>::quiet_NaN();
  p.T = 300;
  WelchConfig small;
  small.segment_length = 64;
  CHECK_THROWS_AS(spectra::estimate_csd(p, small), ValidationError);
}

TEST_CASE("csdm and json round trips") {
  auto model = modelgen::gen_model(
      "random", {.n = 3, .fir_order = 2, .density = 0.5, .seed = 24});
  auto S = ldg::analytic_psd(model, lti::FrequencyGrid(16));
  const auto path =
      (std::filesystem::temp_directory_path() / "kintop_test.csdm").string();
  spectra::write_csdm(S, path);
  auto back = spectra::read_csdm(path);
  CHECK(back.n == S.n);
  CHECK(back.grid.m == S.grid.m);
  for (std::size_t k = 0; k < S.grid.m; ++k)
    CHECK(back.values[k] == S.values[k]);  // bit exact
  std::remove(path.c_str());

  auto j = spectra::to_json(S);
  auto fromj = spectra::spectral_matrix_from_json(j);
  for (std::size_t k = 0; k < S.grid.m; ++k)
    CHECK(fromj.values[k] == S.values[k]);
}
