#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mrgan/affinity.hpp"
#include "mrgan/dataset.hpp"
#include "mrgan/embedding.hpp"
#include "mrgan/measuring.hpp"
#include "mrgan/net.hpp"
#include "mrgan/objective.hpp"
#include "mrgan/optimizer.hpp"
#include "mrgan/rng.hpp"

namespace mrgan {

enum class UpdateScheme { kSimultaneous, kAlternating };

struct TrainConfig {
  std::size_t latent_dim = 2;
  std::vector<std::size_t> gen_widths = {2, 32, 32, 2};
  Activation gen_hidden = Activation::kTanh;
  std::vector<std::size_t> disc_widths = {2, 32, 32, 1};
  Activation disc_hidden = Activation::kTanh;

  MeasuringFunction phi = MeasuringFunction::log_delta(0.1);
  Embedding psi = Embedding::identity();
  double lambda = 0.5;
  AffinityOptions affinity;  // rho 128, full rule
  /// Pair y_i with its nearest still-unpaired real sample instead of by index.
  bool nearest_pairing = false;

  OptimizerConfig gen_opt = OptimizerConfig::adam(1e-3);
  OptimizerConfig disc_opt = OptimizerConfig::adam(1e-3);
  std::size_t batch_size = 256;
  std::size_t iterations = 10000;
  std::uint64_t seed = 1;

  UpdateScheme scheme = UpdateScheme::kSimultaneous;
  /// Discriminator steps per generator step under the alternating scheme.
  std::size_t k_disc = 5;
  /// Clamp bound applied to discriminator parameters after each update;
  /// 0 disables clipping.
  double clip = 0.0;
  /// Project the generator's flattened parameters onto the unit ball after
  /// each update.
  bool project_generator_unit_ball = false;

  std::size_t log_every = 100;
};

struct HistoryRecord {
  std::size_t iter = 0;
  double objective = 0.0;    // payoff + lambda * regularizer
  double gen_loss = 0.0;
  double disc_loss = 0.0;
  double regularizer = 0.0;
  double mean_d_real = 0.0;
  double mean_d_fake = 0.0;
  double wall_ms = 0.0;      // elapsed since training started
};

struct TrainHistory {
  std::vector<HistoryRecord> records;
};

struct TrainResult {
  MlpNetwork generator;
  MlpNetwork discriminator;
  TrainHistory history;
  bool aborted = false;
  std::size_t abort_iteration = 0;
  std::string abort_reason;
};

/// Gaussian latent batch {count, l} with i.i.d. standard normal coordinates.
Tensor sample_latent(Rng& rng, std::size_t l, std::size_t count);

/// Greedy nearest-neighbor pairing: index into x for each row of y, chosen
/// nearest-first in row order without replacement, ties to the lowest index.
std::vector<std::size_t> nearest_pairing(const Tensor& y, const Tensor& x);

// Min-max loop on the empirical objective: each iteration draws a real
// minibatch and fresh latents, rebuilds the affinity graph from the real
// minibatch, then steps the discriminator up the payoff and the generator
// down its loss (simultaneously by default). A non-finite loss or parameter
// aborts the run, restoring the last parameters whose losses evaluated
// finite (an update that was never re-evaluated is rolled back).
TrainResult train(const TrainConfig& config, const Dataset& data);

/// CSV with columns iter, objective, gen_loss, disc_loss, regularizer,
/// mean_D_real, mean_D_fake, wall_ms.
void write_history_csv(const TrainHistory& history, const std::string& path);

}  // namespace mrgan
