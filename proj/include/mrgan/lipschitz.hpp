#pragma once

#include <cstddef>

#include "mrgan/embedding.hpp"
#include "mrgan/measuring.hpp"
#include "mrgan/net.hpp"
#include "mrgan/rng.hpp"

namespace mrgan {

enum class EstimateKind { kExact, kSampledLowerBound };

struct LipschitzEstimate {
  double value = 0.0;
  EstimateKind kind = EstimateKind::kSampledLowerBound;
};

// Smoothness constants of one generator/embedding/measuring triple.
// Measuring-function constants are closed-form; the network constants are
// max difference ratios over random probe pairs, hence lower bounds that can
// only grow as more probes are added.
struct LipschitzEstimates {
  LipschitzEstimate gen_param;        // output change / parameter change
  LipschitzEstimate gen_input;        // output change / latent input change
  LipschitzEstimate embedding;        // psi output change / input change
  LipschitzEstimate measuring;        // Lipschitz constant of phi on [0,1]
  LipschitzEstimate measuring_grad;   // sup |phi'| on [0,1]
  LipschitzEstimate measuring_range;  // diameter of phi's range
};

// Probes the generator at standard normal latents, parameter vectors
// perturbed around the current ones (scale perturbation_scale), and the
// embedding at standard normal ambient points. Coincident probe pairs are
// skipped; if every pair of some family coincides the call fails.
LipschitzEstimates estimate_lipschitz(const MlpNetwork& gen,
                                      const MeasuringFunction& phi,
                                      const Embedding& psi, std::size_t probes,
                                      Rng& rng,
                                      double perturbation_scale = 0.1);

}  // namespace mrgan
