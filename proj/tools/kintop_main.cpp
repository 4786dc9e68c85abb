// Command line front end: gen, simulate, estimate, reconstruct, eval and the
// one-shot pipeline.
//
// Exit codes: 0 success, 2 validation failure, 3 numerical failure,
// 4 evaluation below an --assert-f1 bound.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "kintop/kernels.hpp"
#include "kintop/pipeline.hpp"
#include "kintop/version.hpp"

namespace {

using namespace kintop;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitAssert = 4;

struct AssertFailure {
  std::string message;
};

void print_metrics(const char* label, const graph::EdgeSetMetrics& m) {
  std::printf("  vs %-10s tp=%-3d fp=%-3d fn=%-3d precision=%.4f recall=%.4f f1=%.4f\n",
              label, m.tp, m.fp, m.fn, m.precision, m.recall, m.f1);
}

wiener::ThresholdRule::Kind parse_rule(const std::string& s) {
  if (s == "abs") return wiener::ThresholdRule::Kind::absolute;
  if (s == "rel") return wiener::ThresholdRule::Kind::relative;
  if (s == "topk") return wiener::ThresholdRule::Kind::topk;
  throw ValidationError("unknown threshold rule: " + s);
}

int run(int argc, char** argv) {
  CLI::App app{"Network topology reconstruction from node signals"};
  app.set_version_flag("--version", std::string("kintop ") + kVersion);
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "Generate a model file");
  std::string gen_kind = "random", gen_out = "model.json";
  modelgen::GenParams gp;
  gen->add_option("kind", gen_kind,
                  "ring|tree|random|example-2-1..example-2-4|net24");
  gen->add_option("-n,--nodes", gp.n, "node count");
  gen->add_option("--fir-order", gp.fir_order, "link FIR order");
  gen->add_option("--seed", gp.seed, "generator seed");
  gen->add_option("--gain", gp.gain, "loop gain cap on the unit circle");
  gen->add_option("--density", gp.density, "arc probability (random)");
  gen->add_option("--noise-variance", gp.noise_variance, "node noise power");
  gen->add_flag("--feedthrough", [&gp](std::int64_t) { gp.strictly_causal = false; },
                "allow lag-0 link taps");
  gen->add_flag("--varied-noise", gp.varied_noise, "draw per-node variances");
  gen->add_flag("--shaped-noise", gp.shaped_noise, "random MA(1) shaping");
  gen->add_option("--meas-variance", gp.meas_variance,
                  "attach white measurement noise of this power");
  gen->add_option("-o,--out", gen_out, "output model path");

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "Simulate a model to a panel");
  std::string sim_model, sim_out = "panel.csv";
  long sim_T = 20000;
  std::uint64_t sim_seed = 1;
  bool sim_corrupt = false;
  sim->add_option("--model", sim_model, "model file")->required();
  sim->add_option("-T,--samples", sim_T, "sample count");
  sim->add_option("--seed", sim_seed, "simulation seed");
  sim->add_flag("--corrupt", sim_corrupt, "add measurement noise");
  sim->add_option("-o,--out", sim_out, "panel path (.csv or .bin)");

  // ---- estimate ----
  auto* est = app.add_subcommand("estimate", "Welch CSD from a panel");
  std::string est_panel, est_out = "spectra.bin", est_json;
  std::size_t est_grid = 256;
  double est_overlap = 0.5;
  std::string est_window = "hann";
  bool est_no_detrend = false;
  est->add_option("--panel", est_panel, "panel file")->required();
  est->add_option("--grid", est_grid, "grid size = segment length");
  est->add_option("--overlap", est_overlap, "segment overlap fraction");
  est->add_option("--window", est_window, "hann|rect");
  est->add_flag("--no-detrend", est_no_detrend, "skip mean removal");
  est->add_option("-o,--out", est_out, "CSDM output path");
  est->add_option("--json", est_json, "also write a JSON copy (n <= 8)");

  // ---- reconstruct ----
  auto* rec = app.add_subcommand("reconstruct", "Recover a topology");
  std::string rec_model, rec_spectra, rec_panel, rec_out = "run";
  std::string rec_mode = "noncausal", rec_rule = "rel";
  double rec_tau = 0.1, rec_ridge = 0.0, rec_overlap = 0.5;
  int rec_topk = 2;
  std::size_t rec_grid = 256;
  long rec_T = 20000;
  std::uint64_t rec_seed = 1;
  bool rec_oracle = false, rec_corrupt = false;
  bool rec_dump_spectra = false, rec_dump_rows = false;
  rec->add_option("--model", rec_model, "truth model (simulate or oracle)");
  rec->add_option("--spectra", rec_spectra, "CSDM file to reconstruct from");
  rec->add_option("--panel", rec_panel, "panel file to reconstruct from");
  rec->add_option("--mode", rec_mode, "noncausal|causal|granger");
  rec->add_option("--tau", rec_tau, "threshold parameter");
  rec->add_option("--threshold-rule", rec_rule, "abs|rel|topk");
  rec->add_option("--topk", rec_topk, "k for the topk rule");
  rec->add_option("--grid", rec_grid, "frequency grid size");
  rec->add_option("--ridge", rec_ridge, "diagonal load at inversion");
  rec->add_option("-T,--samples", rec_T, "simulation length");
  rec->add_option("--seed", rec_seed, "simulation seed");
  rec->add_option("--overlap", rec_overlap, "Welch overlap");
  rec->add_flag("--oracle", rec_oracle, "use the analytic PSD of --model");
  rec->add_flag("--corrupt", rec_corrupt, "measure through the noise spec");
  rec->add_flag("--dump-spectra", rec_dump_spectra, "emit spectra.bin");
  rec->add_flag("--dump-rows", rec_dump_rows, "emit rows.json");
  rec->add_option("--out", rec_out, "run directory");

  // ---- eval ----
  auto* ev = app.add_subcommand("eval", "Compare a prediction to a model");
  std::string ev_pred, ev_truth, ev_out;
  ev->add_option("--predicted", ev_pred, "predicted graph JSON")->required();
  ev->add_option("--truth-model", ev_truth, "truth model JSON")->required();
  ev->add_option("-o,--out", ev_out, "metrics JSON path");

  // ---- pipeline ----
  auto* pipe = app.add_subcommand("pipeline", "Run a full config");
  std::string pipe_config, pipe_out, pipe_against = "kin";
  double pipe_assert_f1 = -1.0;
  pipe->add_option("--config", pipe_config, "pipeline config JSON")->required();
  pipe->add_option("--out", pipe_out, "override the output directory");
  pipe->add_option("--assert-f1", pipe_assert_f1,
                   "exit 4 unless f1 >= this value");
  pipe->add_option("--assert-against", pipe_against, "kin|topology");

  auto* kern = app.add_subcommand("kernels", "Print the active kernel backend");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    ldg::LdgModel model = modelgen::gen_model(gen_kind, gp);
    ldg::save_model(model, gen_out);
    ldg::ValidationCertificate cert = ldg::validate(model);
    std::printf("wrote %s: n=%d arcs=%zu well_posed=%d causal=%d self_kin=%d\n",
                gen_out.c_str(), model.n(), model.g.edges.size(),
                cert.well_posed, cert.causal, graph::is_self_kin(model.g));
    return 0;
  }

  if (sim->parsed()) {
    ldg::LdgModel model = ldg::load_model(sim_model);
    ldg::TimeSeriesPanel panel = ldg::simulate(model, sim_T, sim_seed);
    if (sim_corrupt) panel = ldg::corrupt(panel, model, sim_seed ^ 0xC0FFEE);
    ldg::write_panel(panel, sim_out);
    std::printf("wrote %s: n=%d T=%ld seed=%llu\n", sim_out.c_str(), panel.n,
                panel.T, static_cast<unsigned long long>(panel.seed));
    return 0;
  }

  if (est->parsed()) {
    ldg::TimeSeriesPanel panel = ldg::read_panel(est_panel);
    spectra::WelchConfig cfg{est_grid, est_overlap,
                             est_window == "rect" ? spectra::Window::rect
                                                  : spectra::Window::hann,
                             !est_no_detrend};
    spectra::SpectralMatrix S = spectra::estimate_csd(panel, cfg);
    spectra::write_csdm(S, est_out);
    if (!est_json.empty()) {
      std::ofstream out(est_json);
      out << spectra::to_json(S).dump(2) << '\n';
    }
    spectra::ConditionReport rep = spectra::condition_report(S);
    std::printf("wrote %s: n=%d m=%zu worst condition %.3g at bin %zu\n",
                est_out.c_str(), S.n, S.grid.m, rep.worst, rep.worst_bin);
    return 0;
  }

  if (rec->parsed()) {
    if (!rec_model.empty()) {
      pipeline::PipelineConfig cfg;
      cfg.model.path = rec_model;
      cfg.T = rec_T;
      cfg.seed = rec_seed;
      cfg.grid = rec_grid;
      cfg.overlap = rec_overlap;
      cfg.mode = rec_mode == "causal"    ? wiener::FilterMode::causal
                 : rec_mode == "granger" ? wiener::FilterMode::granger
                                         : wiener::FilterMode::noncausal;
      cfg.threshold.kind = parse_rule(rec_rule);
      cfg.threshold.tau = rec_tau;
      cfg.threshold.k = rec_topk;
      cfg.oracle = rec_oracle;
      cfg.corrupt = rec_corrupt;
      cfg.ridge = rec_ridge;
      cfg.dump_spectra = rec_dump_spectra;
      cfg.dump_rows = rec_dump_rows;
      cfg.out_dir = rec_out;
      pipeline::RunResult r = pipeline::run_pipeline(cfg);
      pipeline::write_run_dir(cfg, r);
      std::printf("predicted %zu edges -> %s\n", r.predicted.edges.size(),
                  rec_out.c_str());
      print_metrics("topology", r.vs_topology);
      print_metrics("kin graph", r.vs_kin);
      return 0;
    }

    // Reconstruction straight from data; no ground truth, no metrics.
    spectra::SpectralMatrix S;
    if (!rec_spectra.empty()) {
      S = spectra::read_csdm(rec_spectra);
    } else if (!rec_panel.empty()) {
      ldg::TimeSeriesPanel panel = ldg::read_panel(rec_panel);
      S = spectra::estimate_csd(
          panel, spectra::WelchConfig{rec_grid, rec_overlap,
                                      spectra::Window::hann, true});
    } else {
      throw ValidationError(
          "reconstruct needs --model, --spectra or --panel");
    }
    std::vector<wiener::WienerRow> rows;
    for (int j = 0; j < S.n; ++j) {
      if (rec_mode == "causal")
        rows.push_back(wiener::causal_wiener_row(S, j));
      else if (rec_mode == "granger")
        rows.push_back(wiener::granger_row(S, j));
      else
        rows.push_back(wiener::noncausal_wiener_row(S, j, rec_ridge));
    }
    wiener::ThresholdRule rule{parse_rule(rec_rule), rec_tau, rec_topk};
    wiener::EdgeDecisions decided = wiener::decide_edges(rows, rule);
    std::filesystem::create_directories(rec_out);
    std::ofstream(std::filesystem::path(rec_out) / "predicted.json")
        << graph::to_json(decided.g).dump(2) << '\n';
    std::ofstream(std::filesystem::path(rec_out) / "predicted.dot")
        << graph::to_dot(decided.g);
    std::ofstream(std::filesystem::path(rec_out) / "scores.csv")
        << wiener::scores_csv(wiener::norm_matrix(rows));
    std::ofstream(std::filesystem::path(rec_out) / "decisions.json")
        << wiener::to_json(decided.decisions).dump(2) << '\n';
    std::printf("predicted %zu edges -> %s\n", decided.g.edges.size(),
                rec_out.c_str());
    return 0;
  }

  if (ev->parsed()) {
    std::ifstream in(ev_pred);
    if (!in) throw ValidationError("cannot open " + ev_pred);
    nlohmann::json pj;
    in >> pj;
    graph::UndirectedGraph predicted = graph::undirected_from_json(pj);
    ldg::LdgModel truth = ldg::load_model(ev_truth);
    graph::EdgeSetMetrics vs_top =
        graph::compare_edge_sets(predicted, graph::topology(truth.g));
    graph::EdgeSetMetrics vs_kin =
        graph::compare_edge_sets(predicted, graph::kin_graph(truth.g));
    print_metrics("topology", vs_top);
    print_metrics("kin graph", vs_kin);
    if (!ev_out.empty()) {
      nlohmann::json mj = {{"vs_topology", graph::to_json(vs_top)},
                           {"vs_kin_graph", graph::to_json(vs_kin)}};
      std::ofstream out(ev_out);
      out << mj.dump(2) << '\n';
    }
    return 0;
  }

  if (pipe->parsed()) {
    pipeline::PipelineConfig cfg = pipeline::load_config(pipe_config);
    if (!pipe_out.empty()) cfg.out_dir = pipe_out;
    pipeline::RunResult r = pipeline::run_pipeline(cfg);
    if (!cfg.out_dir.empty()) pipeline::write_run_dir(cfg, r);
    std::printf("predicted %zu edges (mode %s)\n", r.predicted.edges.size(),
                rec_mode.c_str());
    print_metrics("topology", r.vs_topology);
    print_metrics("kin graph", r.vs_kin);
    if (pipe_assert_f1 >= 0.0) {
      const double f1 =
          pipe_against == "topology" ? r.vs_topology.f1 : r.vs_kin.f1;
      if (f1 < pipe_assert_f1)
        throw AssertFailure{"f1 " + std::to_string(f1) + " below bound " +
                            std::to_string(pipe_assert_f1)};
    }
    return 0;
  }

  if (kern->parsed()) {
    std::printf("active: %s (avx2 %s)\n",
                kernels::backend_name(kernels::active_backend()),
                kernels::avx2_supported() ? "available" : "unavailable");
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const AssertFailure& e) {
    std::fprintf(stderr, "assertion failed: %s\n", e.message.c_str());
    return kExitAssert;
  } catch (const kintop::ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kExitValidation;
  } catch (const kintop::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
