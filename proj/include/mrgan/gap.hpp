#pragma once

#include <cstddef>
#include <vector>

#include "mrgan/dataset.hpp"
#include "mrgan/objective.hpp"
#include "mrgan/train.hpp"

namespace mrgan {

// Measures how far the size-m empirical objective sits from a population
// surrogate, for fixed (randomly initialized) networks. The surrogate is the
// same objective on one very large sample; the exact population value has no
// closed form for these mixtures.
struct GapConfig {
  // Network shapes and objective ingredients; only latent_dim, widths,
  // activations, phi, psi, lambda, affinity.rho, and seed are read.
  TrainConfig model;
  MixtureSpec mixture = MixtureSpec::ring8();
  std::vector<std::size_t> m_values = {16, 64, 256, 1024};
  std::size_t population_m = 0;  // 0 means 100 * max(m_values)
  std::size_t trials = 50;
};

struct GapRow {
  std::size_t m = 0;
  double mean_abs_gap = 0.0;
  double std_abs_gap = 0.0;
};

struct GapReport {
  std::vector<GapRow> rows;  // one per m, in m_values order
  std::size_t population_m = 0;
  std::size_t trials = 0;
  double population_value = 0.0;
};

// Per m: draws `trials` fresh batches, evaluates the empirical objective on
// each, and reports mean and standard deviation of |F_m - F_population|.
// Requires the full affinity rule (the population pass never materializes
// the m x m weight matrix, which only the closed-form rule permits).
GapReport objective_gap(const GapConfig& config);

/// Empirical objective (payoff + lambda * regularizer, full affinity rule
/// with bandwidth rho) computed pair-by-pair without storing weights;
/// matches empirical_objective to rounding. Rows are processed in parallel,
/// reduced in index order.
double fused_objective(const MlpNetwork& disc, const Batch& batch,
                       const MeasuringFunction& phi, const Embedding& psi,
                       double lambda, double rho);

}  // namespace mrgan
