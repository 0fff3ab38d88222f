#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mrgan/dataset.hpp"
#include "mrgan/geometry_score.hpp"
#include "mrgan/train.hpp"

namespace mrgan {

// JSON run configuration. Every field has a default, the serializer
// materializes all of them, and nlohmann::json keeps object keys sorted, so
// parse -> serialize -> parse is byte-stable. Unknown keys and out-of-range
// values are rejected with the offending field's dotted path.

struct DatasetConfig {
  std::string kind = "ring8";  // ring8 | ring8_hyperplane | csv | idx
  std::size_t n = 8192;        // synthetic pool size
  std::size_t modes = 8;
  double radius = 2.0;
  double sigma = 0.05;
  std::uint64_t hyperplane_seed = 13;
  std::string path;     // csv / idx source
  std::size_t dim = 2;  // csv column count
  bool header = false;
};

struct NetConfig {
  std::vector<std::size_t> widths = {2, 32, 32, 2};
  std::string hidden = "tanh";
};

struct EmbeddingConfig {
  std::string kind = "identity";  // identity | autoencoder
  std::vector<std::size_t> encoder_widths;
  std::size_t pretrain_iters = 2000;
  double pretrain_lr = 1e-3;
};

struct ObjectiveConfig {
  std::string phi = "log_delta";  // log_delta | identity
  double delta = 0.1;
  double lambda = 0.5;
  double rho = 128.0;
  std::string neighbor_rule = "full";  // full | knn
  std::size_t k = 8;
  bool nearest_pairing = false;
};

struct OptimizerSection {
  std::string kind = "adam";  // adam | rmsprop | sgd
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double decay = 0.9;
};

struct TrainingConfig {
  OptimizerSection generator;
  OptimizerSection discriminator;
  std::size_t batch_size = 256;
  std::size_t iterations = 10000;
  std::string scheme = "simultaneous";  // simultaneous | alternating
  std::size_t k_disc = 5;
  double clip = 0.0;
  bool project_generator_unit_ball = false;
  std::size_t log_every = 100;
};

struct AnalysisSection {
  // stability (point-mass family)
  std::string family = "dirac";
  double stability_lambda = 0.5;
  std::string regularizer = "quadratic";  // quadratic | pairwise
  double dt = 0.01;
  std::size_t flow_steps = 2500;
  // gap
  std::vector<std::size_t> gap_m = {16, 64, 256, 1024};
  std::size_t gap_trials = 50;
  std::size_t population_m = 0;  // 0 means 100 * max(gap_m)
  // equilibrium
  double eq_epsilon = 0.1;
  std::size_t eq_restarts = 10;
  std::size_t eq_steps = 2000;
  double eps_fit = 0.01;
  std::size_t fit_iters = 4000;
};

struct OutputSection {
  std::string dir = "run";
  std::size_t eval_n = 2048;  // samples drawn per side for GS / plots
  std::size_t gs_landmarks = 64;
  double gs_gamma = 1.0 / 128.0;
  std::size_t gs_i_max = 100;
  std::size_t gs_repeats = 100;
  std::size_t gs_steps = 100;
};

struct RunConfig {
  DatasetConfig dataset;
  NetConfig generator;
  NetConfig discriminator{{2, 32, 32, 1}, "tanh"};
  EmbeddingConfig embedding;
  ObjectiveConfig objective;
  TrainingConfig training;
  AnalysisSection analysis;
  OutputSection output;
  std::uint64_t seed = 1;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);

/// Canonical serialized form (2-space indent, sorted keys, trailing newline).
std::string config_to_string(const RunConfig& config);

RunConfig load_config(const std::string& path);
void save_config(const RunConfig& config, const std::string& path);

/// Built-in experiment configurations:
///   ring8-gan-baseline   8 gaussians in a 3D hyperplane, log_delta phi, no
///                        regularizer (lambda 0)
///   ring8-mrgan          same but lambda 0.5, rho 128
///   ring8-wgan           identity phi, RMSProp 1e-4, alternating updates
///                        with weight clipping
///   dirac                point-mass stability fixture for analyze
///   mnist-reduced        small dense-net image run (IDX or stand-in data)
RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// Training-loop view of the config. psi must be built separately (the
/// autoencoder variant needs data); it defaults to identity here.
TrainConfig to_train_config(const RunConfig& config);

/// GS parameters from the output section.
GsParams to_gs_params(const RunConfig& config);

/// Draws or loads the dataset named by the config.
Dataset build_dataset(const RunConfig& config, Rng& rng);

/// Mixture geometry for synthetic datasets; errors for csv/idx kinds.
MixtureSpec dataset_mixture_spec(const RunConfig& config);

}  // namespace mrgan
