#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mrgan/config.hpp"
#include "mrgan/geometry_score.hpp"

namespace mrgan {

// Record of one command invocation: where it wrote, the exact configuration
// snapshot it ran under, and every file it emitted (manifest.json included).
// The snapshot round-trips byte-identically through config_to_string.
struct RunManifest {
  std::string out_dir;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::vector<std::string> artifacts;  // paths relative to out_dir
  std::string tool_version;
  bool aborted = false;
  std::string abort_reason;
};

nlohmann::json manifest_to_json(const RunManifest& manifest);

// Trains on the configured dataset and writes config.json, history.csv,
// generator.json, discriminator.json, samples.svg, and manifest.json into
// output.dir. A run that aborts on non-finite losses still writes its
// rolled-back checkpoint and reports aborted/abort_reason in the manifest.
RunManifest run_train(const RunConfig& config);

// Compares two sample clouds with the geometry score and writes
// gs_report.json. Each input path is either a network checkpoint (*.json;
// output.eval_n fresh draws are pushed through it) or a CSV whose column
// count is inferred from its first row. Clouds of different dimension are
// rejected. The score lands in *report when given.
RunManifest run_eval_gs(const RunConfig& config, const std::string& real_path,
                        const std::string& generated_path, GsReport* report = nullptr);

// Closed-form diagnostics, one JSON report per mode:
//   stability    point-mass game spectrum, Hurwitz verdict, and a gradient
//                flow trajectory from (1, 1)        -> stability.json
//   gap          batch-size sweep of |F_m - F_pop|  -> gap.json
//   equilibrium  mixture-vs-adversary saddle check  -> equilibrium.json
RunManifest run_analyze(const RunConfig& config, const std::string& mode);

struct SweepRow {
  double lambda = 0.0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  std::string status;  // ok | aborted | error: <what>
  double gs = 0.0;
  std::size_t modes_covered = 0;
  std::size_t total_modes = 0;
  double high_quality_fraction = 0.0;
  std::string dir;  // row subdirectory, relative to the sweep directory
};

// Trains one run per (lambda, rho) grid cell in its own subdirectory, then
// scores each checkpoint (geometry score against a fresh real cloud, mode
// coverage when the dataset has mixture geometry) into sweep.csv. A lambda=0
// baseline row at the first rho is prepended when the grid lacks one. A row
// that fails is recorded with its error and the sweep moves on.
RunManifest run_sweep(const RunConfig& config, const std::vector<double>& lambdas,
                      const std::vector<double>& rhos,
                      std::vector<SweepRow>* rows = nullptr);

/// Samples the configured dataset and writes it as data.csv.
RunManifest run_gen_data(const RunConfig& config);

}  // namespace mrgan
