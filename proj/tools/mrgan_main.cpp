#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mrgan/config.hpp"
#include "mrgan/error.hpp"
#include "mrgan/runner.hpp"
#include "mrgan/version.hpp"

namespace {

// Exit codes: 0 success, 1 rejected input (bad flags, bad config, missing
// files), 2 runtime failure (a training run that aborted on non-finite
// numbers, or an unexpected error mid-run).
constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kRuntimeFailure = 2;

struct CommonOpts {
  std::string config_path;
  std::string preset_name;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  auto* config_opt =
      cmd->add_option("--config", o.config_path, "JSON configuration file");
  auto* preset_opt = cmd->add_option("--preset", o.preset_name,
                                     "named preset configuration");
  preset_opt->check(CLI::IsMember(mrgan::preset_names()));
  config_opt->excludes(preset_opt);
  cmd->add_option("--seed", o.seed, "base seed override")
      ->each([&o](const std::string&) { o.seed_set = true; });
  cmd->add_option("--out", o.out_dir, "output directory override");
}

mrgan::RunConfig resolve(const CommonOpts& o) {
  mrgan::RunConfig config;
  if (!o.config_path.empty())
    config = mrgan::load_config(o.config_path);
  else if (!o.preset_name.empty())
    config = mrgan::preset(o.preset_name);
  if (o.seed_set) config.seed = o.seed;
  if (!o.out_dir.empty()) config.output.dir = o.out_dir;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale laboratory for manifold-regularized GAN training"};
  app.set_version_flag("--version", mrgan::kVersion);
  app.require_subcommand(1);

  CommonOpts train_o, eval_o, analyze_o, sweep_o, gen_o;

  CLI::App* train_cmd =
      app.add_subcommand("train", "train a model and write run artifacts");
  add_common(train_cmd, train_o);

  CLI::App* eval_cmd = app.add_subcommand(
      "eval-gs", "geometry score between two sample clouds (CSV or checkpoint)");
  add_common(eval_cmd, eval_o);
  std::string real_path, gen_path;
  eval_cmd->add_option("--real", real_path, "real samples: CSV or network checkpoint")
      ->required();
  eval_cmd->add_option("--gen", gen_path, "generated samples: CSV or network checkpoint")
      ->required();

  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "closed-form diagnostics of the training game");
  add_common(analyze_cmd, analyze_o);
  std::string mode = "stability";
  analyze_cmd->add_option("--mode", mode, "stability, gap, or equilibrium")
      ->check(CLI::IsMember({"stability", "gap", "equilibrium"}));

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "train a (lambda, rho) grid and tabulate scores");
  add_common(sweep_cmd, sweep_o);
  std::vector<double> lambdas, rhos;
  sweep_cmd->add_option("--lambdas", lambdas, "regularization weights to sweep")
      ->delimiter(',');
  sweep_cmd->add_option("--rhos", rhos, "affinity bandwidths to sweep")
      ->delimiter(',');

  CLI::App* gen_cmd =
      app.add_subcommand("gen-data", "sample the configured dataset to CSV");
  add_common(gen_cmd, gen_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (train_cmd->parsed()) {
      const mrgan::RunManifest manifest = mrgan::run_train(resolve(train_o));
      if (manifest.aborted) {
        std::cerr << "training aborted: " << manifest.abort_reason << "\n";
        std::cerr << "partial artifacts in " << manifest.out_dir << "\n";
        return kRuntimeFailure;
      }
      std::cout << "run artifacts in " << manifest.out_dir << "\n";
    } else if (eval_cmd->parsed()) {
      mrgan::GsReport report;
      const mrgan::RunManifest manifest =
          mrgan::run_eval_gs(resolve(eval_o), real_path, gen_path, &report);
      std::cout << "gs " << report.gs << "\n";
      std::cout << "report in " << manifest.out_dir << "/gs_report.json\n";
    } else if (analyze_cmd->parsed()) {
      const mrgan::RunManifest manifest = mrgan::run_analyze(resolve(analyze_o), mode);
      std::cout << "report in " << manifest.out_dir << "/" << mode << ".json\n";
    } else if (sweep_cmd->parsed()) {
      mrgan::RunConfig config = resolve(sweep_o);
      if (lambdas.empty()) lambdas = {config.objective.lambda};
      if (rhos.empty()) rhos = {config.objective.rho};
      std::vector<mrgan::SweepRow> rows;
      const mrgan::RunManifest manifest = mrgan::run_sweep(config, lambdas, rhos, &rows);
      for (const mrgan::SweepRow& r : rows)
        std::cout << "lambda " << r.lambda << " rho " << r.rho << " status "
                  << r.status << " gs " << r.gs << " modes " << r.modes_covered
                  << "/" << r.total_modes << "\n";
      std::cout << "table in " << manifest.out_dir << "/sweep.csv\n";
    } else if (gen_cmd->parsed()) {
      const mrgan::RunManifest manifest = mrgan::run_gen_data(resolve(gen_o));
      std::cout << "dataset in " << manifest.out_dir << "/data.csv\n";
    }
  } catch (const mrgan::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return kRuntimeFailure;
  }
  return kOk;
}
