#include "mrgan/lipschitz.hpp"

#include <cmath>
#include <vector>

#include "mrgan/error.hpp"

namespace mrgan {
namespace {

double vector_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double row_dist(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.at(i) - b.at(i);
    s += d * d;
  }
  return std::sqrt(s);
}

Tensor normal_row(std::size_t dim, Rng& rng) {
  Tensor t({1, dim});
  for (double& x : t.data) x = rng.normal();
  return t;
}

// Tracks the max ratio and whether any probe pair was usable.
struct RatioMax {
  double value = 0.0;
  std::size_t valid = 0;

  void feed(double num, double den) {
    if (den == 0.0) return;  // coincident pair, no information
    ++valid;
    const double r = num / den;
    if (r > value) value = r;
  }
};

}  // namespace

LipschitzEstimates estimate_lipschitz(const MlpNetwork& gen,
                                      const MeasuringFunction& phi,
                                      const Embedding& psi, std::size_t probes,
                                      Rng& rng, double perturbation_scale) {
  require(probes >= 1, "estimate_lipschitz: probes must be >= 1");
  require(perturbation_scale > 0.0,
          "estimate_lipschitz: perturbation_scale must be positive");

  const std::size_t latent = gen.in_dim();
  const std::size_t ambient = gen.out_dim();
  const std::vector<double> base = gen.flat_params();

  RatioMax param_ratio;
  RatioMax input_ratio;
  RatioMax embed_ratio;
  MlpNetwork probe_a = gen;
  MlpNetwork probe_b = gen;
  std::vector<double> pa(base.size());
  std::vector<double> pb(base.size());

  for (std::size_t p = 0; p < probes; ++p) {
    // Parameter pair at a shared latent.
    const Tensor h = normal_row(latent, rng);
    for (std::size_t i = 0; i < base.size(); ++i)
      pa[i] = base[i] + perturbation_scale * rng.normal();
    for (std::size_t i = 0; i < base.size(); ++i)
      pb[i] = base[i] + perturbation_scale * rng.normal();
    probe_a.set_flat_params(pa);
    probe_b.set_flat_params(pb);
    param_ratio.feed(row_dist(probe_a.forward(h), probe_b.forward(h)),
                     vector_dist(pa, pb));

    // Latent pair at fixed parameters.
    const Tensor h1 = normal_row(latent, rng);
    const Tensor h2 = normal_row(latent, rng);
    input_ratio.feed(row_dist(gen.forward(h1), gen.forward(h2)),
                     row_dist(h1, h2));

    // Ambient pair through the embedding.
    const Tensor x1 = normal_row(ambient, rng);
    const Tensor x2 = normal_row(ambient, rng);
    embed_ratio.feed(row_dist(psi.embed(x1), psi.embed(x2)), row_dist(x1, x2));
  }

  require(param_ratio.valid > 0,
          "estimate_lipschitz: every parameter probe pair coincided");
  require(input_ratio.valid > 0,
          "estimate_lipschitz: every latent probe pair coincided");
  require(embed_ratio.valid > 0,
          "estimate_lipschitz: every embedding probe pair coincided");

  LipschitzEstimates est;
  est.gen_param = {param_ratio.value, EstimateKind::kSampledLowerBound};
  est.gen_input = {input_ratio.value, EstimateKind::kSampledLowerBound};
  est.embedding = {embed_ratio.value, EstimateKind::kSampledLowerBound};
  est.measuring = {phi.lipschitz(), EstimateKind::kExact};
  est.measuring_grad = {phi.derivative_sup(), EstimateKind::kExact};
  est.measuring_range = {phi.range_width(), EstimateKind::kExact};
  return est;
}

}  // namespace mrgan
