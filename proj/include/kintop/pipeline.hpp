#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "kintop/graph.hpp"
#include "kintop/ldg.hpp"
#include "kintop/modelgen.hpp"
#include "kintop/spectra.hpp"
#include "kintop/wiener.hpp"

// End-to-end orchestration: obtain a model, obtain spectra (analytic oracle
// or simulate + estimate), solve the per-node Wiener problems, threshold,
// evaluate against the ground truth and write a reproducible run directory.

namespace kintop::pipeline {

struct ModelSource {
  // Either a model file path or a generator spec.
  std::string path;
  std::string kind;
  modelgen::GenParams params;

  bool from_file() const { return !path.empty(); }
};

struct PipelineConfig {
  ModelSource model;
  long T = 20000;
  std::uint64_t seed = 1;
  std::size_t grid = 256;
  double overlap = 0.5;
  spectra::Window window = spectra::Window::hann;
  bool detrend = true;
  wiener::FilterMode mode = wiener::FilterMode::noncausal;
  wiener::ThresholdRule threshold;
  bool oracle = false;
  bool corrupt = false;
  double ridge = 0.0;
  bool dump_spectra = false;
  bool dump_rows = false;
  std::string out_dir;

  spectra::WelchConfig welch() const {
    return {grid, overlap, window, detrend};
  }
};

// Accepts a plain config document or a run manifest (its "config" field).
PipelineConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const PipelineConfig& cfg);
PipelineConfig load_config(const std::string& path);

struct RunResult {
  ldg::LdgModel model;
  ldg::ValidationCertificate certificate;
  spectra::SpectralMatrix spectra_used;
  std::vector<wiener::WienerRow> rows;
  graph::UndirectedGraph predicted;
  std::vector<wiener::EdgeDecision> decisions;
  graph::EdgeSetMetrics vs_topology;
  graph::EdgeSetMetrics vs_kin;
};

ldg::LdgModel resolve_model(const ModelSource& src);

// Runs every stage in memory; writes nothing.
RunResult run_pipeline(const PipelineConfig& cfg);

// manifest.json, predicted.json/.dot, scores.csv, decisions.json,
// metrics.json and optional spectra.bin / rows.json under cfg.out_dir.
void write_run_dir(const PipelineConfig& cfg, const RunResult& result);

// Metrics document used by the eval command and the run directory.
nlohmann::json metrics_json(const RunResult& result);

}  // namespace kintop::pipeline
