#include "kintop/pipeline.hpp"

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "kintop/version.hpp"

namespace kintop::pipeline {

namespace {

wiener::FilterMode mode_from_string(const std::string& s) {
  if (s == "noncausal") return wiener::FilterMode::noncausal;
  if (s == "causal") return wiener::FilterMode::causal;
  if (s == "granger") return wiener::FilterMode::granger;
  throw ValidationError("unknown mode: " + s);
}

std::string mode_to_string(wiener::FilterMode m) {
  switch (m) {
    case wiener::FilterMode::noncausal: return "noncausal";
    case wiener::FilterMode::causal: return "causal";
    case wiener::FilterMode::granger: return "granger";
  }
  return "noncausal";
}

wiener::ThresholdRule::Kind rule_from_string(const std::string& s) {
  if (s == "abs") return wiener::ThresholdRule::Kind::absolute;
  if (s == "rel") return wiener::ThresholdRule::Kind::relative;
  if (s == "topk") return wiener::ThresholdRule::Kind::topk;
  throw ValidationError("unknown threshold rule: " + s);
}

std::string rule_to_string(wiener::ThresholdRule::Kind k) {
  switch (k) {
    case wiener::ThresholdRule::Kind::absolute: return "abs";
    case wiener::ThresholdRule::Kind::relative: return "rel";
    case wiener::ThresholdRule::Kind::topk: return "topk";
  }
  return "rel";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace

PipelineConfig config_from_json(const nlohmann::json& doc) {
  const nlohmann::json& j = doc.contains("config") ? doc.at("config") : doc;
  PipelineConfig cfg;

  const nlohmann::json& mj = j.at("model");
  if (mj.is_string()) {
    cfg.model.path = mj.get<std::string>();
  } else {
    cfg.model.kind = mj.at("kind").get<std::string>();
    modelgen::GenParams& p = cfg.model.params;
    p.n = mj.value("n", p.n);
    p.fir_order = mj.value("fir_order", p.fir_order);
    p.strictly_causal = mj.value("strictly_causal", p.strictly_causal);
    p.gain = mj.value("gain", p.gain);
    p.density = mj.value("density", p.density);
    p.noise_variance = mj.value("noise_variance", p.noise_variance);
    p.varied_noise = mj.value("varied_noise", p.varied_noise);
    p.shaped_noise = mj.value("shaped_noise", p.shaped_noise);
    p.meas_variance = mj.value("meas_variance", p.meas_variance);
    p.seed = mj.value("seed", p.seed);
  }

  cfg.T = j.value("T", cfg.T);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.grid = j.value("grid", cfg.grid);
  if (j.contains("welch")) {
    const auto& w = j.at("welch");
    cfg.overlap = w.value("overlap", cfg.overlap);
    cfg.detrend = w.value("detrend", cfg.detrend);
    const std::string win = w.value("window", std::string("hann"));
    if (win == "hann")
      cfg.window = spectra::Window::hann;
    else if (win == "rect")
      cfg.window = spectra::Window::rect;
    else
      throw ValidationError("unknown window: " + win);
  }
  cfg.mode = mode_from_string(j.value("mode", std::string("noncausal")));
  if (j.contains("threshold")) {
    const auto& t = j.at("threshold");
    cfg.threshold.kind = rule_from_string(t.value("rule", std::string("rel")));
    cfg.threshold.tau = t.value("tau", cfg.threshold.tau);
    cfg.threshold.k = t.value("k", cfg.threshold.k);
  }
  cfg.oracle = j.value("oracle", cfg.oracle);
  cfg.corrupt = j.value("corrupt", cfg.corrupt);
  cfg.ridge = j.value("ridge", cfg.ridge);
  cfg.dump_spectra = j.value("dump_spectra", cfg.dump_spectra);
  cfg.dump_rows = j.value("dump_rows", cfg.dump_rows);
  cfg.out_dir = j.value("out", cfg.out_dir);
  return cfg;
}

nlohmann::json config_to_json(const PipelineConfig& cfg) {
  nlohmann::json j;
  if (cfg.model.from_file()) {
    j["model"] = cfg.model.path;
  } else {
    const modelgen::GenParams& p = cfg.model.params;
    j["model"] = {{"kind", cfg.model.kind},
                  {"n", p.n},
                  {"fir_order", p.fir_order},
                  {"strictly_causal", p.strictly_causal},
                  {"gain", p.gain},
                  {"density", p.density},
                  {"noise_variance", p.noise_variance},
                  {"varied_noise", p.varied_noise},
                  {"shaped_noise", p.shaped_noise},
                  {"meas_variance", p.meas_variance},
                  {"seed", p.seed}};
  }
  j["T"] = cfg.T;
  j["seed"] = cfg.seed;
  j["grid"] = cfg.grid;
  j["welch"] = {{"overlap", cfg.overlap},
                {"window", cfg.window == spectra::Window::hann ? "hann" : "rect"},
                {"detrend", cfg.detrend}};
  j["mode"] = mode_to_string(cfg.mode);
  j["threshold"] = {{"rule", rule_to_string(cfg.threshold.kind)},
                    {"tau", cfg.threshold.tau},
                    {"k", cfg.threshold.k}};
  j["oracle"] = cfg.oracle;
  j["corrupt"] = cfg.corrupt;
  j["ridge"] = cfg.ridge;
  j["dump_spectra"] = cfg.dump_spectra;
  j["dump_rows"] = cfg.dump_rows;
  if (!cfg.out_dir.empty()) j["out"] = cfg.out_dir;
  return j;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  nlohmann::json j;
  in >> j;
  return config_from_json(j);
}

ldg::LdgModel resolve_model(const ModelSource& src) {
  if (src.from_file()) return ldg::load_model(src.path);
  return modelgen::gen_model(src.kind, src.params);
}

RunResult run_pipeline(const PipelineConfig& cfg) {
  RunResult r;
  r.model = resolve_model(cfg.model);
  lti::FrequencyGrid grid(cfg.grid);

  r.certificate = ldg::validate(r.model, grid);
  if (!r.certificate.well_posed)
    throw ValidationError("model is not well posed (min |det(I-H)| = " +
                          std::to_string(r.certificate.min_det) + ")");
  if (!r.certificate.detectable)
    throw ValidationError("model is not topologically detectable");
  if (cfg.mode == wiener::FilterMode::granger && cfg.oracle &&
      !r.certificate.strictly_causal)
    throw ValidationError(
        "granger mode with oracle spectra requires a strictly causal model");

  const bool corrupted = cfg.corrupt;
  if (corrupted && !r.model.measurement_noise)
    throw ValidationError("corrupt run requested but the model carries no "
                          "measurement noise spec");

  if (cfg.oracle) {
    r.spectra_used = corrupted ? ldg::analytic_output_psd(r.model, grid)
                               : ldg::analytic_psd(r.model, grid);
  } else {
    ldg::TimeSeriesPanel panel = ldg::simulate(r.model, cfg.T, cfg.seed);
    if (corrupted) panel = ldg::corrupt(panel, r.model, cfg.seed ^ 0xC0FFEE);
    r.spectra_used = spectra::estimate_csd(panel, cfg.welch());
  }

  const int n = r.model.n();
  r.rows.reserve(n);
  for (int j = 0; j < n; ++j) {
    switch (cfg.mode) {
      case wiener::FilterMode::noncausal:
        r.rows.push_back(
            wiener::noncausal_wiener_row(r.spectra_used, j, cfg.ridge));
        break;
      case wiener::FilterMode::causal:
        r.rows.push_back(wiener::causal_wiener_row(r.spectra_used, j));
        break;
      case wiener::FilterMode::granger:
        r.rows.push_back(wiener::granger_row(r.spectra_used, j));
        break;
    }
  }

  wiener::EdgeDecisions decided = wiener::decide_edges(r.rows, cfg.threshold);
  r.predicted = std::move(decided.g);
  r.decisions = std::move(decided.decisions);

  r.vs_topology =
      graph::compare_edge_sets(r.predicted, graph::topology(r.model.g));
  r.vs_kin = graph::compare_edge_sets(r.predicted, graph::kin_graph(r.model.g));
  return r;
}

nlohmann::json metrics_json(const RunResult& result) {
  return {{"vs_topology", graph::to_json(result.vs_topology)},
          {"vs_kin_graph", graph::to_json(result.vs_kin)}};
}

void write_run_dir(const PipelineConfig& cfg, const RunResult& result) {
  if (cfg.out_dir.empty())
    throw ValidationError("no output directory configured");
  std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);

  nlohmann::json manifest = {
      {"tool", "kintop"},
      {"version", kVersion},
      {"config", config_to_json(cfg)},
      {"certificate",
       {{"well_posed", result.certificate.well_posed},
        {"min_det", result.certificate.min_det},
        {"detectable", result.certificate.detectable},
        {"causal", result.certificate.causal},
        {"strictly_causal", result.certificate.strictly_causal}}}};
  write_json(dir / "manifest.json", manifest);

  write_json(dir / "predicted.json", graph::to_json(result.predicted));
  write_text(dir / "predicted.dot", graph::to_dot(result.predicted));
  write_text(dir / "scores.csv",
             wiener::scores_csv(wiener::norm_matrix(result.rows)));
  write_json(dir / "decisions.json", wiener::to_json(result.decisions));
  write_json(dir / "metrics.json", metrics_json(result));
  if (cfg.dump_spectra)
    spectra::write_csdm(result.spectra_used, (dir / "spectra.bin").string());
  if (cfg.dump_rows) {
    nlohmann::json rows = nlohmann::json::array();
    for (const wiener::WienerRow& row : result.rows)
      rows.push_back(wiener::to_json(row));
    write_json(dir / "rows.json", rows);
  }
}

}  // namespace kintop::pipeline
