#pragma once

#include <cstddef>
#include <vector>

#include "mrgan/dataset.hpp"
#include "mrgan/embedding.hpp"
#include "mrgan/measuring.hpp"
#include "mrgan/net.hpp"
#include "mrgan/rng.hpp"
#include "mrgan/tensor.hpp"

namespace mrgan {

// Finite mixture of generators sampled uniformly; the candidate approximate
// equilibrium on the generator side.
struct GeneratorMixture {
  std::vector<MlpNetwork> components;
  std::size_t latent_dim = 0;

  /// count rows; each draws a uniform component and pushes a fresh standard
  /// normal latent through it.
  Tensor sample(std::size_t count, Rng& rng) const;
};

struct MixtureFitReport {
  std::vector<double> final_errors;  // mean |G(h) - target| per component
  std::vector<bool> reached;         // error <= eps_fit
  double eps_fit = 0.0;
};

// Trains one small generator per target point to collapse onto it (mean
// squared distance descent) and returns the uniform mixture. Components that
// never reach eps_fit are kept and reported, not dropped.
GeneratorMixture build_uniform_mixture(const Tensor& targets,
                                       const std::vector<std::size_t>& gen_widths,
                                       std::size_t fit_iters, double eps_fit,
                                       Rng& rng,
                                       MixtureFitReport* report = nullptr);

struct EquilibriumReport {
  double half_payoff_target = 0.0;    // 2 phi(1/2)
  double half_payoff_estimate = 0.0;  // objective with D fixed at 1/2
  double regularizer_estimate = 0.0;  // the lambda-weighted part of the above
  double best_adversary_value = 0.0;  // highest objective any adversary found
  bool half_side_ok = false;          // |estimate - target| <= epsilon
  bool adversary_side_ok = false;     // best adversary <= target + epsilon
  bool pass = false;
  double epsilon = 0.0;
};

// Checks a (mixture, D = 1/2) pair for an approximate saddle point. The
// constant-discriminator side evaluates the objective with D fixed at 1/2,
// whose payoff is exactly 2 phi(1/2); generated samples are paired with
// their nearest real ones (reused freely) so the regularizer measures
// displacement rather than head-count luck across modes. The sup side
// trains `restarts` fresh discriminators
// (`steps` Adam iterations each) against the frozen mixture and keeps the
// best objective reached. Both verdicts land in the report; nothing throws
// on a failed check.
EquilibriumReport verify_equilibrium(const GeneratorMixture& mixture,
                                     const Dataset& data,
                                     const MeasuringFunction& phi,
                                     const Embedding& psi, double lambda,
                                     double epsilon, std::size_t restarts,
                                     std::size_t steps, Rng& rng);

}  // namespace mrgan
