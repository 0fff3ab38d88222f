#include "mrgan/objective.hpp"

#include <string>
#include <vector>

#include "mrgan/error.hpp"

namespace mrgan {

void validate_batch(const Batch& batch) {
  require(batch.x.rank() == 2 && batch.y.rank() == 2,
          "batch: x and y must be rank-2 tensors");
  require(batch.x.same_shape(batch.y),
          "batch: x " + batch.x.shape_str() + " and y " + batch.y.shape_str() +
              " must pair by index with equal shapes");
  require(batch.x.shape[0] >= 1, "batch: empty");
  if (batch.h.size() > 0) {
    require(batch.h.rank() == 2 && batch.h.shape[0] == batch.x.shape[0],
            "batch: latent count does not match sample count");
  }
}

double manifold_regularizer(const Tensor& x, const Tensor& y,
                            const Embedding& psi, const AffinityGraph& w) {
  require(x.rank() == 2 && y.rank() == 2 && x.same_shape(y),
          "manifold_regularizer: x and y must be rank-2 with equal shapes");
  const std::size_t m = x.shape[0];
  require(w.size() == m, "manifold_regularizer: affinity size " +
                             std::to_string(w.size()) +
                             " does not match batch size " + std::to_string(m));
  const Tensor px = psi.embed(x);
  const Tensor py = psi.embed(y);
  require(px.same_shape(py),
          "manifold_regularizer: embedding output shapes differ");
  const std::size_t k = px.shape[1];

  // f_i = psi(y_i) - psi(x_i)
  Tensor f({m, k});
  for (std::size_t i = 0; i < m * k; ++i) f.data[i] = py.data[i] - px.data[i];

  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double wij = w.weights.at(i, j);
      if (wij == 0.0) continue;
      double dist = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        const double diff = f.at(i, c) - f.at(j, c);
        dist += diff * diff;
      }
      acc += wij * dist;
    }
  }
  return acc / static_cast<double>(m * m);
}

double manifold_regularizer(const Batch& batch, const Embedding& psi,
                            const AffinityGraph& w) {
  validate_batch(batch);
  return manifold_regularizer(batch.x, batch.y, psi, w);
}

double discriminator_payoff(const MlpNetwork& disc, const Batch& batch,
                            const MeasuringFunction& phi) {
  validate_batch(batch);
  const Tensor dx = discriminator_forward(disc, batch.x);
  const Tensor dy = discriminator_forward(disc, batch.y);
  const std::size_t m = batch.x.shape[0];
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    acc += phi.apply(dx.at(i, 0)) + phi.apply(1.0 - dy.at(i, 0));
  return acc / static_cast<double>(m);
}

double empirical_objective(const MlpNetwork& disc, const Batch& batch,
                           const MeasuringFunction& phi, const Embedding& psi,
                           const AffinityGraph& w, double lambda) {
  require(lambda >= 0.0, "empirical_objective: lambda must be nonnegative");
  return discriminator_payoff(disc, batch, phi) +
         lambda * manifold_regularizer(batch, psi, w);
}

double generator_loss_value(const MlpNetwork& disc, const Batch& batch,
                            const MeasuringFunction& phi, const Embedding& psi,
                            const AffinityGraph& w, double lambda) {
  require(lambda >= 0.0, "generator_loss: lambda must be nonnegative");
  validate_batch(batch);
  const Tensor dy = discriminator_forward(disc, batch.y);
  const std::size_t m = batch.y.shape[0];
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) acc += phi.apply(1.0 - dy.at(i, 0));
  return acc / static_cast<double>(m) +
         lambda * manifold_regularizer(batch, psi, w);
}

double discriminator_loss_value(const MlpNetwork& disc, const Batch& batch,
                                const MeasuringFunction& phi) {
  return -discriminator_payoff(disc, batch, phi);
}

Var regularizer_graph(Tape& tape, Var f, const AffinityGraph& w) {
  const Tensor& fv = tape.value(f);
  require(fv.rank() == 2, "regularizer_graph: f must be rank 2");
  const std::size_t m = fv.shape[0], k = fv.shape[1];
  require(w.size() == m, "regularizer_graph: affinity size mismatch");

  // sum_ij w_ij |f_i - f_j|^2 = 2 sum_i deg_i |f_i|^2 - 2 sum_ij w_ij f_i.f_j
  const std::vector<double> deg = w.degrees();
  Tensor deg_rows({m, k});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t c = 0; c < k; ++c) deg_rows.at(i, c) = deg[i];

  Var term1 = tape.sum(tape.mul(tape.mul(f, f), tape.constant(deg_rows)));
  Var wf = tape.matmul(tape.constant(w.weights), f);
  Var term2 = tape.sum(tape.mul(f, wf));
  return tape.mul_scalar(tape.sub(term1, term2),
                         2.0 / static_cast<double>(m * m));
}

GeneratorLossGraph generator_loss_graph(Tape& tape, const MlpNetwork& gen,
                                        const MlpNetwork& disc, const Batch& batch,
                                        const MeasuringFunction& phi,
                                        const Embedding& psi,
                                        const AffinityGraph& w, double lambda) {
  validate_batch(batch);
  require(lambda >= 0.0, "generator_loss: lambda must be nonnegative");
  require(batch.h.size() > 0, "generator_loss: batch carries no latent codes");
  const std::size_t m = batch.x.shape[0];

  GeneratorLossGraph graph;
  graph.gen_params = gen.bind(tape, "gen");
  Var h = tape.constant(batch.h);
  graph.y = gen.forward_tape(tape, graph.gen_params, h);

  Var dy = disc.forward_tape_frozen(tape, graph.y);
  Var one_minus = tape.sub(tape.constant(Tensor::full({m, 1}, 1.0)), dy);
  Var gen_term = tape.mean(phi.apply_tape(tape, one_minus));

  Var psi_y = psi.embed_tape(tape, graph.y);
  Var psi_x = tape.constant(psi.embed(batch.x));
  Var f = tape.sub(psi_y, psi_x);
  graph.regularizer = regularizer_graph(tape, f, w);

  graph.loss = tape.add(gen_term, tape.mul_scalar(graph.regularizer, lambda));
  return graph;
}

DiscriminatorLossGraph discriminator_loss_graph(Tape& tape,
                                                const MlpNetwork& disc,
                                                const Batch& batch,
                                                const MeasuringFunction& phi) {
  validate_batch(batch);
  const std::size_t m = batch.x.shape[0];

  DiscriminatorLossGraph graph;
  graph.disc_params = disc.bind(tape, "disc");
  Var dx = disc.forward_tape(tape, graph.disc_params, tape.constant(batch.x));
  Var dy = disc.forward_tape(tape, graph.disc_params, tape.constant(batch.y));
  graph.mean_d_real = tape.mean(dx);
  graph.mean_d_fake = tape.mean(dy);

  Var px = tape.mean(phi.apply_tape(tape, dx));
  Var one_minus = tape.sub(tape.constant(Tensor::full({m, 1}, 1.0)), dy);
  Var py = tape.mean(phi.apply_tape(tape, one_minus));
  graph.payoff = tape.add(px, py);
  graph.loss = tape.mul_scalar(graph.payoff, -1.0);
  return graph;
}

}  // namespace mrgan
