#pragma once

#include "mrgan/affinity.hpp"
#include "mrgan/embedding.hpp"
#include "mrgan/measuring.hpp"
#include "mrgan/net.hpp"
#include "mrgan/tape.hpp"
#include "mrgan/tensor.hpp"

namespace mrgan {

// One training minibatch: m real samples x, m generated samples y paired by
// index, and the latent codes h that produced y.
struct Batch {
  Tensor x;  // {m, d}
  Tensor y;  // {m, d}
  Tensor h;  // {m, l}; may be empty when y was not produced by a generator
};

void validate_batch(const Batch& batch);

/// (1/m^2) sum_ij w_ij |psi(y_i) - psi(x_i) - psi(y_j) + psi(x_j)|^2,
/// evaluated as the literal double sum over ordered pairs.
double manifold_regularizer(const Tensor& x, const Tensor& y,
                            const Embedding& psi, const AffinityGraph& w);
double manifold_regularizer(const Batch& batch, const Embedding& psi,
                            const AffinityGraph& w);

/// (1/m) sum_i [phi(D(x_i)) + phi(1 - D(y_i))] -- the adversary's payoff.
double discriminator_payoff(const MlpNetwork& disc, const Batch& batch,
                            const MeasuringFunction& phi);

/// Payoff plus lambda times the manifold regularizer.
double empirical_objective(const MlpNetwork& disc, const Batch& batch,
                           const MeasuringFunction& phi, const Embedding& psi,
                           const AffinityGraph& w, double lambda);

/// (1/m) sum_i phi(1 - D(y_i)) + lambda * regularizer (minimized in u).
double generator_loss_value(const MlpNetwork& disc, const Batch& batch,
                            const MeasuringFunction& phi, const Embedding& psi,
                            const AffinityGraph& w, double lambda);

/// Negated payoff (minimized in v == maximizing the payoff).
double discriminator_loss_value(const MlpNetwork& disc, const Batch& batch,
                                const MeasuringFunction& phi);

/// Tape subgraph for sum_ij w_ij |f_i - f_j|^2 / m^2 given f as an {m, k}
/// node, using the degree/bilinear expansion of the pair sum.
Var regularizer_graph(Tape& tape, Var f, const AffinityGraph& w);

struct GeneratorLossGraph {
  Var loss;
  Var regularizer;
  Var y;  // generated batch node {m, d}
  TapeParams gen_params;
};

/// Builds y = G_u(h) and the generator loss on one tape. The discriminator,
/// embedding parameters, and affinity weights enter as constants; gradients
/// reach only the generator parameters (and flow through psi into y).
GeneratorLossGraph generator_loss_graph(Tape& tape, const MlpNetwork& gen,
                                        const MlpNetwork& disc, const Batch& batch,
                                        const MeasuringFunction& phi,
                                        const Embedding& psi,
                                        const AffinityGraph& w, double lambda);

struct DiscriminatorLossGraph {
  Var loss;
  Var payoff;
  Var mean_d_real;
  Var mean_d_fake;
  TapeParams disc_params;
};

/// Builds the negated payoff on one tape with both batches as constants;
/// gradients reach only the discriminator parameters.
DiscriminatorLossGraph discriminator_loss_graph(Tape& tape,
                                                const MlpNetwork& disc,
                                                const Batch& batch,
                                                const MeasuringFunction& phi);

}  // namespace mrgan
