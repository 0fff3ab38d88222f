#include "mrgan/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mrgan/dynamics.hpp"
#include "mrgan/eig.hpp"
#include "mrgan/equilibrium.hpp"
#include "mrgan/error.hpp"
#include "mrgan/gap.hpp"
#include "mrgan/mode_coverage.hpp"
#include "mrgan/svg.hpp"
#include "mrgan/version.hpp"

namespace mrgan {
namespace {

namespace fs = std::filesystem;

// Seed streams used by the runner; train() derives its own streams from the
// same base seed, so these stay out of its range.
constexpr std::uint64_t kDataStream = 99;
constexpr std::uint64_t kPretrainStream = 98;
constexpr std::uint64_t kEvalStream = 97;
constexpr std::uint64_t kRealLoadStream = 96;
constexpr std::uint64_t kGenLoadStream = 95;
constexpr std::uint64_t kFitStream = 94;
constexpr std::uint64_t kVerifyStream = 93;
constexpr std::uint64_t kSweepEvalStream = 92;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  require(out.good(), "cannot write file: " + path);
  out << text;
  require(out.good(), "failed writing file: " + path);
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

RunManifest start_manifest(const RunConfig& config) {
  RunManifest m;
  m.out_dir = config.output.dir;
  m.config = config_to_json(config);
  m.seed = config.seed;
  m.tool_version = kVersion;
  fs::create_directories(config.output.dir);
  save_config(config, config.output.dir + "/config.json");
  m.artifacts.push_back("config.json");
  return m;
}

void finish_manifest(RunManifest& m) {
  m.artifacts.push_back("manifest.json");
  write_text(m.out_dir + "/manifest.json", json_text(manifest_to_json(m)));
}

/// Embedding from config; autoencoders are pretrained on the real samples.
Embedding build_embedding(const RunConfig& config, const Tensor& data, Rng rng) {
  if (config.embedding.kind == "identity") return Embedding::identity();
  require(!config.embedding.encoder_widths.empty() &&
              config.embedding.encoder_widths.front() == data.shape[1],
          "embedding.encoder_widths: first width must equal the data dimension " +
              std::to_string(data.shape[1]));
  return pretrain_autoencoder(data, config.embedding.encoder_widths,
                              config.embedding.pretrain_iters,
                              OptimizerConfig::adam(config.embedding.pretrain_lr), rng);
}

void check_shapes_against_data(const RunConfig& config, const Dataset& data) {
  require(config.generator.widths.back() == data.dim(),
          "generator.widths: last width (" +
              std::to_string(config.generator.widths.back()) +
              ") must equal the data dimension (" + std::to_string(data.dim()) + ")");
  require(config.discriminator.widths.front() == data.dim(),
          "discriminator.widths: first width (" +
              std::to_string(config.discriminator.widths.front()) +
              ") must equal the data dimension (" + std::to_string(data.dim()) + ")");
}

/// Samples for eval-gs: a network checkpoint (*.json) sampled fresh, or a
/// CSV whose column count comes from its first row (a non-numeric first row
/// is treated as a header).
Dataset load_cloud(const std::string& path, const RunConfig& config, Rng rng) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    MlpNetwork net = MlpNetwork::load(path);
    Tensor h = sample_latent(rng, net.in_dim(), config.output.eval_n);
    return Dataset{net.forward(h), path};
  }
  std::ifstream in(path);
  require(in.good(), "cannot open samples file: " + path);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "samples file is empty: " + path);
  in.close();

  std::size_t cols = 1;
  bool header = false;
  std::stringstream row(line);
  std::string cell;
  cols = 0;
  while (std::getline(row, cell, ',')) {
    ++cols;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    (void)v;
    while (end != nullptr && (*end == ' ' || *end == '\r' || *end == '\t')) ++end;
    if (end == cell.c_str() || (end != nullptr && *end != '\0')) header = true;
  }
  require(cols >= 1, "samples file has no columns: " + path);
  return load_csv(path, cols, header);
}

Dataset head_rows(const Dataset& data, std::size_t cap) {
  if (data.size() <= cap) return data;
  Tensor out = Tensor::zeros({cap, data.dim()});
  for (std::size_t i = 0; i < cap; ++i) {
    const std::size_t r = i * data.size() / cap;
    for (std::size_t j = 0; j < data.dim(); ++j) out.at(i, j) = data.samples.at(r, j);
  }
  return Dataset{std::move(out), data.provenance};
}

nlohmann::json spectrum_json(const std::vector<std::complex<double>>& spectrum) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& z : spectrum)
    arr.push_back({{"re", z.real()}, {"im", z.imag()}});
  return arr;
}

}  // namespace

nlohmann::json manifest_to_json(const RunManifest& m) {
  return {{"out_dir", m.out_dir},     {"config", m.config},
          {"seed", m.seed},           {"artifacts", m.artifacts},
          {"tool_version", m.tool_version}, {"aborted", m.aborted},
          {"abort_reason", m.abort_reason}};
}

RunManifest run_train(const RunConfig& config) {
  Rng root(config.seed);
  Rng data_rng = root.split(kDataStream);
  const Dataset data = build_dataset(config, data_rng);
  check_shapes_against_data(config, data);

  TrainConfig tc = to_train_config(config);
  tc.psi = build_embedding(config, data.samples, root.split(kPretrainStream));

  RunManifest manifest = start_manifest(config);
  TrainResult result = train(tc, data);
  manifest.aborted = result.aborted;
  manifest.abort_reason = result.abort_reason;

  write_history_csv(result.history, config.output.dir + "/history.csv");
  manifest.artifacts.push_back("history.csv");
  result.generator.save(config.output.dir + "/generator.json");
  manifest.artifacts.push_back("generator.json");
  result.discriminator.save(config.output.dir + "/discriminator.json");
  manifest.artifacts.push_back("discriminator.json");

  Rng eval_rng = root.split(kEvalStream);
  Tensor h = sample_latent(eval_rng, tc.latent_dim, config.output.eval_n);
  write_scatter_svg(data.samples, result.generator.forward(h),
                    config.output.dir + "/samples.svg");
  manifest.artifacts.push_back("samples.svg");

  finish_manifest(manifest);
  return manifest;
}

RunManifest run_eval_gs(const RunConfig& config, const std::string& real_path,
                        const std::string& generated_path, GsReport* report) {
  Rng root(config.seed);
  const Dataset real = load_cloud(real_path, config, root.split(kRealLoadStream));
  const Dataset gen = load_cloud(generated_path, config, root.split(kGenLoadStream));
  require(real.dim() == gen.dim(),
          "sample clouds disagree on dimension: " + std::to_string(real.dim()) +
              " vs " + std::to_string(gen.dim()));

  RunManifest manifest = start_manifest(config);
  const GsReport gs = geometry_score_report(real, gen, to_gs_params(config));
  if (report != nullptr) *report = gs;
  write_text(config.output.dir + "/gs_report.json", gs_report_json(gs));
  manifest.artifacts.push_back("gs_report.json");
  finish_manifest(manifest);
  return manifest;
}

RunManifest run_analyze(const RunConfig& config, const std::string& mode) {
  require(mode == "stability" || mode == "gap" || mode == "equilibrium",
          "unknown analyze mode \"" + mode +
              "\"; expected stability, gap, or equilibrium");
  RunManifest manifest = start_manifest(config);
  const AnalysisSection& a = config.analysis;
  Rng root(config.seed);

  if (mode == "stability") {
    DiracGan game;
    game.lambda = a.stability_lambda;
    game.reg = a.regularizer == "pairwise" ? PointMassRegularizer::kPairwise
                                           : PointMassRegularizer::kQuadratic;
    const HurwitzReport hw = hurwitz_check(game.jacobian());
    const std::vector<double> origin{0.0, 0.0};
    Trajectory traj = integrate_dynamics(game.as_field(), {1.0, 1.0}, a.dt,
                                         a.flow_steps, 1e6, &origin);
    nlohmann::json j{{"family", a.family},
                     {"lambda", a.stability_lambda},
                     {"regularizer", a.regularizer},
                     {"spectrum", spectrum_json(hw.spectrum)},
                     {"is_hurwitz", hw.is_hurwitz},
                     {"converged", hw.converged},
                     {"trajectory",
                      {{"dt", a.dt},
                       {"steps", a.flow_steps},
                       {"divergent", traj.divergent},
                       {"initial_distance", traj.ref_distance.front()},
                       {"final_distance", traj.ref_distance.back()}}}};
    write_text(config.output.dir + "/stability.json", json_text(j));
    manifest.artifacts.push_back("stability.json");
  } else if (mode == "gap") {
    GapConfig gc;
    gc.model = to_train_config(config);
    gc.mixture = dataset_mixture_spec(config);
    gc.m_values = a.gap_m;
    gc.population_m = a.population_m;
    gc.trials = a.gap_trials;
    const GapReport report = objective_gap(gc);
    nlohmann::json rows = nlohmann::json::array();
    for (const GapRow& r : report.rows)
      rows.push_back({{"m", r.m},
                      {"mean_abs_gap", r.mean_abs_gap},
                      {"std_abs_gap", r.std_abs_gap}});
    nlohmann::json j{{"population_m", report.population_m},
                     {"trials", report.trials},
                     {"population_value", report.population_value},
                     {"rows", rows}};
    write_text(config.output.dir + "/gap.json", json_text(j));
    manifest.artifacts.push_back("gap.json");
  } else {
    const MixtureSpec spec = dataset_mixture_spec(config);
    Rng data_rng = root.split(kDataStream);
    const Dataset data = build_dataset(config, data_rng);
    const Embedding psi =
        build_embedding(config, data.samples, root.split(kPretrainStream));
    const MeasuringFunction phi =
        config.objective.phi == "identity"
            ? MeasuringFunction::identity()
            : MeasuringFunction::log_delta(config.objective.delta);

    MixtureFitReport fit;
    Rng fit_rng = root.split(kFitStream);
    const GeneratorMixture mixture =
        build_uniform_mixture(mode_centers(spec), config.generator.widths,
                              a.fit_iters, a.eps_fit, fit_rng, &fit);
    Rng verify_rng = root.split(kVerifyStream);
    const EquilibriumReport report =
        verify_equilibrium(mixture, data, phi, psi, config.objective.lambda,
                           a.eq_epsilon, a.eq_restarts, a.eq_steps, verify_rng);
    nlohmann::json j{{"fit",
                      {{"eps_fit", fit.eps_fit},
                       {"final_errors", fit.final_errors},
                       {"reached", fit.reached}}},
                     {"half_payoff_target", report.half_payoff_target},
                     {"half_payoff_estimate", report.half_payoff_estimate},
                     {"regularizer_estimate", report.regularizer_estimate},
                     {"best_adversary_value", report.best_adversary_value},
                     {"half_side_ok", report.half_side_ok},
                     {"adversary_side_ok", report.adversary_side_ok},
                     {"pass", report.pass},
                     {"epsilon", report.epsilon}};
    write_text(config.output.dir + "/equilibrium.json", json_text(j));
    manifest.artifacts.push_back("equilibrium.json");
  }

  finish_manifest(manifest);
  return manifest;
}

RunManifest run_sweep(const RunConfig& config, const std::vector<double>& lambdas,
                      const std::vector<double>& rhos,
                      std::vector<SweepRow>* rows_out) {
  require(!lambdas.empty(), "sweep needs at least one lambda");
  require(!rhos.empty(), "sweep needs at least one rho");

  std::vector<std::pair<double, double>> grid;
  const bool has_baseline =
      std::any_of(lambdas.begin(), lambdas.end(), [](double l) { return l == 0.0; });
  if (!has_baseline) grid.emplace_back(0.0, rhos.front());
  for (double lambda : lambdas)
    for (double rho : rhos) grid.emplace_back(lambda, rho);

  RunManifest manifest = start_manifest(config);
  const bool synthetic =
      config.dataset.kind == "ring8" || config.dataset.kind == "ring8_hyperplane";

  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SweepRow row;
    row.lambda = grid[i].first;
    row.rho = grid[i].second;
    row.seed = config.seed;
    char name[64];
    std::snprintf(name, sizeof(name), "row%02zu_lambda%g_rho%g", i, row.lambda,
                  row.rho);
    row.dir = name;

    RunConfig rc = config;
    rc.objective.lambda = row.lambda;
    rc.objective.rho = row.rho;
    rc.output.dir = config.output.dir + "/" + row.dir;
    try {
      const RunManifest trained = run_train(rc);
      row.status = trained.aborted ? "aborted" : "ok";

      const MlpNetwork gen = MlpNetwork::load(rc.output.dir + "/generator.json");
      Rng eval_rng = Rng(rc.seed).split(kSweepEvalStream);
      Tensor h = sample_latent(eval_rng, gen.in_dim(), rc.output.eval_n);
      const Dataset gen_eval{gen.forward(h), "sweep eval"};
      Dataset real_eval;
      if (synthetic) {
        real_eval = sample_mixture(dataset_mixture_spec(rc), rc.output.eval_n, eval_rng);
      } else {
        Rng load_rng = Rng(rc.seed).split(kDataStream);
        real_eval = head_rows(build_dataset(rc, load_rng), rc.output.eval_n);
      }
      row.gs = geometry_score(real_eval, gen_eval, to_gs_params(rc));
      if (synthetic) {
        const ModeReport coverage = mode_coverage(gen_eval, dataset_mixture_spec(rc));
        row.modes_covered = coverage.modes_covered;
        row.total_modes = coverage.total_modes;
        row.high_quality_fraction = coverage.high_quality_fraction;
      }
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }

    // The row directory is listed as it actually exists, so files written
    // before a row failure still appear in the sweep manifest.
    if (fs::exists(rc.output.dir)) {
      std::vector<std::string> files;
      for (const auto& entry : fs::directory_iterator(rc.output.dir))
        if (entry.is_regular_file()) files.push_back(entry.path().filename().string());
      std::sort(files.begin(), files.end());
      for (const std::string& f : files) manifest.artifacts.push_back(row.dir + "/" + f);
    }
    rows.push_back(row);
  }

  std::ostringstream csv;
  csv << "lambda,rho,seed,status,gs,modes_covered,total_modes,high_quality_fraction\n";
  for (const SweepRow& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    csv << fmt(r.lambda) << ',' << fmt(r.rho) << ',' << r.seed << ',' << status << ','
        << fmt(r.gs) << ',' << r.modes_covered << ',' << r.total_modes << ','
        << fmt(r.high_quality_fraction) << '\n';
  }
  write_text(config.output.dir + "/sweep.csv", csv.str());
  manifest.artifacts.push_back("sweep.csv");

  if (rows_out != nullptr) *rows_out = rows;
  finish_manifest(manifest);
  return manifest;
}

RunManifest run_gen_data(const RunConfig& config) {
  Rng root(config.seed);
  Rng data_rng = root.split(kDataStream);
  const Dataset data = build_dataset(config, data_rng);
  RunManifest manifest = start_manifest(config);
  save_csv(data, config.output.dir + "/data.csv");
  manifest.artifacts.push_back("data.csv");
  finish_manifest(manifest);
  return manifest;
}

}  // namespace mrgan
