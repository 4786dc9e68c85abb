#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "kintop/ldg.hpp"
#include "kintop/modelgen.hpp"
#include "kintop/spectra.hpp"
#include "test_util.hpp"

using namespace kintop;
using lti::TransferFunction;
using cdouble = std::complex<double>;

namespace {

ldg::LdgModel empty_model(int n) {
  ldg::LdgModel m;
  m.g = graph::DirectedGraph(n);
  m.noise.assign(n, ldg::NoiseSpec{});
  return m;
}

double channel_variance(const ldg::TimeSeriesPanel& p, int j) {
  double mean = 0.0;
  for (long t = 0; t < p.T; ++t) mean += p.at(j, t);
  mean /= static_cast<double>(p.T);
  double var = 0.0;
  for (long t = 0; t < p.T; ++t) {
    const double d = p.at(j, t) - mean;
    var += d * d;
  }
  return var / static_cast<double>(p.T);
}

}  // namespace

TEST_CASE("structure checks") {
  auto m = empty_model(2);
  m.g.add_edge(0, 1);  // arc without a link
  CHECK_THROWS_AS(m.check_structure(), ValidationError);

  auto ok = testutil::cascade2(TransferFunction({0.5}, 1));
  CHECK_NOTHROW(ok.check_structure());
  ok.noise[0].variance = 0.0;
  CHECK_THROWS_AS(ok.check_structure(), ValidationError);
}

TEST_CASE("validation certificate") {
  SUBCASE("empty model") {
    auto cert = ldg::validate(empty_model(3));
    CHECK(cert.well_posed);
    CHECK(cert.min_det == doctest::Approx(1.0));
    CHECK(cert.detectable);
    CHECK(cert.causal);
  }
  SUBCASE("single causal arc") {
    auto cert = ldg::validate(testutil::cascade2(TransferFunction({0.5}, 1)));
    CHECK(cert.well_posed);
    CHECK(cert.causal);
    CHECK(cert.strictly_causal);
  }
  SUBCASE("ring with small gains is well posed") {
    // |H| < 1/n on the circle keeps I - H diagonally dominant.
    ldg::LdgModel m = empty_model(4);
    for (int i = 0; i < 4; ++i)
      m.add_link(i, (i + 1) % 4, TransferFunction({0.2}, 1));
    CHECK(ldg::validate(m).well_posed);
  }
  SUBCASE("anticausal link is flagged") {
    auto m = testutil::cascade2(TransferFunction({0.5}, -1));
    auto cert = ldg::validate(m);
    CHECK(cert.well_posed);
    CHECK_FALSE(cert.causal);
  }
  SUBCASE("feedthrough is causal but not strictly causal") {
    auto cert = ldg::validate(testutil::cascade2(TransferFunction({0.5}, 0)));
    CHECK(cert.causal);
    CHECK_FALSE(cert.strictly_causal);
  }
}

TEST_CASE("analytic psd") {
  lti::FrequencyGrid grid(64);
  SUBCASE("no edges, unit white noise") {
    auto S = ldg::analytic_psd(empty_model(3), grid);
    for (const auto& M : S.values)
      CHECK((M - Eigen::MatrixXcd::Identity(3, 3)).norm() < 1e-12);
  }
  SUBCASE("two node cascade matches the closed form") {
    TransferFunction h({0.4, -0.3}, 1);
    auto S = ldg::analytic_psd(testutil::cascade2(h), grid);
    auto hf = lti::freq_response(h, grid);
    for (std::size_t k = 0; k < grid.m; ++k) {
      const double want = std::norm(hf.values[k]) * 1.0 + 1.0;
      CHECK(S.values[k](1, 1).real() == doctest::Approx(want).epsilon(1e-10));
      CHECK(std::abs(S.values[k](1, 0) - hf.values[k]) < 1e-10);
    }
  }
  SUBCASE("invariants hold exactly") {
    auto model = modelgen::gen_model(
        "random", {.n = 6, .fir_order = 2, .density = 0.3, .seed = 5});
    auto S = ldg::analytic_psd(model, grid);
    for (std::size_t k = 0; k < grid.m; ++k) {
      CHECK((S.values[k] - S.values[k].adjoint()).norm() == 0.0);
      Eigen::LLT<Eigen::MatrixXcd> llt(S.values[k]);
      CHECK(llt.info() == Eigen::Success);  // positive definite
      if (k >= 1 && k < grid.m / 2)
        CHECK((S.values[grid.m - k] - S.values[k].conjugate()).norm() == 0.0);
    }
  }
  SUBCASE("measurement noise adds to the diagonal") {
    auto m = testutil::cascade2(TransferFunction({0.5}, 1));
    std::vector<ldg::NoiseSpec> mn(2);
    mn[0].variance = 0.25;
    mn[1].variance = 0.25;
    m.measurement_noise = mn;
    auto Sx = ldg::analytic_psd(m, grid);
    auto Sy = ldg::analytic_output_psd(m, grid);
    for (std::size_t k = 0; k < grid.m; ++k) {
      Eigen::MatrixXcd diff = Sy.values[k] - Sx.values[k];
      CHECK((diff - 0.25 * Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-14);
    }
  }
}

TEST_CASE("simulation") {
  SUBCASE("white noise variance") {
    auto panel = ldg::simulate(empty_model(2), 10000, 42);
    CHECK(channel_variance(panel, 0) == doctest::Approx(1.0).epsilon(0.1));
    CHECK(channel_variance(panel, 1) == doctest::Approx(1.0).epsilon(0.1));
  }
  SUBCASE("ar cascade variance") {
    auto m = testutil::cascade2(TransferFunction({0.9}, 1));
    auto panel = ldg::simulate(m, 200000, 7);
    // var(x1) = 0.81 var(x0) + 1
    const double v0 = channel_variance(panel, 0);
    const double v1 = channel_variance(panel, 1);
    CHECK(v1 == doctest::Approx(0.81 * v0 + 1.0).epsilon(0.05));
  }
  SUBCASE("determinism") {
    auto m = testutil::cascade2(TransferFunction({0.5, 0.2}, 1));
    auto a = ldg::simulate(m, 500, 9);
    auto b = ldg::simulate(m, 500, 9);
    CHECK(a.data == b.data);
    auto c = ldg::simulate(m, 500, 10);
    CHECK(a.data != c.data);
  }
  SUBCASE("non-causal models are rejected") {
    auto m = testutil::cascade2(TransferFunction({0.5}, -2));
    CHECK_THROWS_AS(ldg::simulate(m, 100, 1), ValidationError);
  }
  SUBCASE("divergence is detected") {
    ldg::LdgModel m = empty_model(3);
    for (int i = 0; i < 3; ++i)
      m.add_link(i, (i + 1) % 3, TransferFunction({1.5}, 1));
    CHECK_THROWS_AS(ldg::simulate(m, 5000, 1), NumericalError);
  }
  SUBCASE("feedthrough loop is resolved algebraically") {
    // x0 = e0, x1 = 0.5 x0 + e1 with a lag-0 tap
    auto m = testutil::cascade2(TransferFunction({0.5}, 0));
    auto panel = ldg::simulate(m, 20000, 3);
    const double v1 = channel_variance(panel, 1);
    CHECK(v1 == doctest::Approx(1.25).epsilon(0.05));
  }
}

TEST_CASE("corruption") {
  auto m = testutil::cascade2(TransferFunction({0.6}, 1));
  SUBCASE("missing spec throws") {
    auto panel = ldg::simulate(m, 1000, 1);
    CHECK_THROWS_AS(ldg::corrupt(panel, m, 2), ValidationError);
  }
  std::vector<ldg::NoiseSpec> mn(2);
  mn[0].variance = 0.5;
  mn[1].variance = 0.5;
  m.measurement_noise = mn;
  auto panel = ldg::simulate(m, 100000, 1);
  auto y = ldg::corrupt(panel, m, 2);
  SUBCASE("variance additivity") {
    for (int j = 0; j < 2; ++j)
      CHECK(channel_variance(y, j) ==
            doctest::Approx(channel_variance(panel, j) + 0.5).epsilon(0.06));
  }
  SUBCASE("noise is uncorrelated with the signal") {
    const long T = panel.T;
    for (int j = 0; j < 2; ++j) {
      double acc = 0.0;
      for (long t = 0; t < T; ++t)
        acc += panel.at(j, t) * (y.at(j, t) - panel.at(j, t));
      const double corr =
          acc / T / std::sqrt(channel_variance(panel, j) * 0.5);
      CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(T)));
    }
  }
}

TEST_CASE("welch estimate matches the analytic psd") {
  // Causal model, long run, coarse relative Frobenius tolerance.
  auto model = modelgen::gen_model(
      "random", {.n = 3, .fir_order = 3, .density = 0.4, .seed = 21});
  auto panel = ldg::simulate(model, 200000, 17);
  spectra::WelchConfig cfg;
  cfg.segment_length = 1024;
  auto est = spectra::estimate_csd(panel, cfg);
  auto ref = ldg::analytic_psd(model, lti::FrequencyGrid(1024));
  double err = 0.0;
  for (std::size_t k = 0; k < est.grid.m; ++k)
    err += (est.values[k] - ref.values[k]).norm() / ref.values[k].norm();
  err /= static_cast<double>(est.grid.m);
  CHECK(err < 0.15);
}

TEST_CASE("model json round trip") {
  auto model = modelgen::gen_model(
      "random",
      {.n = 5, .fir_order = 2, .density = 0.3, .shaped_noise = true,
       .meas_variance = 0.1, .seed = 33});
  auto j = ldg::to_json(model);
  auto back = ldg::model_from_json(j);
  CHECK(back.g.edges == model.g.edges);
  CHECK(back.links == model.links);
  REQUIRE(back.measurement_noise.has_value());
  for (int i = 0; i < model.n(); ++i) {
    CHECK(back.noise[i].variance == model.noise[i].variance);
    CHECK(back.noise[i].shaping == model.noise[i].shaping);
  }
}

TEST_CASE("panel io round trips") {
  auto m = testutil::cascade2(TransferFunction({0.5}, 1));
  auto panel = ldg::simulate(m, 300, 5);
  const auto dir = std::filesystem::temp_directory_path();
  const std::string csv = (dir / "kintop_test_panel.csv").string();
  const std::string bin = (dir / "kintop_test_panel.bin").string();

  ldg::write_panel(panel, csv);
  auto from_csv = ldg::read_panel(csv);
  CHECK(from_csv.n == panel.n);
  CHECK(from_csv.T == panel.T);
  for (int j = 0; j < panel.n; ++j)
    for (long t = 0; t < panel.T; ++t)
      CHECK(from_csv.at(j, t) == panel.at(j, t));  // 17 digits round trip

  ldg::write_panel(panel, bin);
  auto from_bin = ldg::read_panel(bin);
  CHECK(from_bin.data == panel.data);  // bit exact

  std::remove(csv.c_str());
  std::remove(bin.c_str());
}
