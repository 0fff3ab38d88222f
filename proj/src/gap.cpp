#include "mrgan/gap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "mrgan/error.hpp"

namespace mrgan {
namespace {

// Row sums of sum_j w_ij |f_i - f_j|^2 computed by a worker pool into
// per-row slots; summing the slots in index order keeps the result
// independent of scheduling.
double fused_pair_sum(const Tensor& x, const Tensor& fx, double rho) {
  const std::size_t m = x.shape[0];
  const std::size_t d = x.shape[1];
  const std::size_t k = fx.shape[1];

  std::vector<double> row_sum(m, 0.0);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= m) return;
      const double* xi = x.data.data() + i * d;
      const double* fi = fx.data.data() + i * k;
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double* xj = x.data.data() + j * d;
        double dist2 = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
          const double dx = xi[c] - xj[c];
          dist2 += dx * dx;
        }
        const double* fj = fx.data.data() + j * k;
        double diff2 = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
          const double df = fi[c] - fj[c];
          diff2 += df * df;
        }
        acc += std::exp(-dist2 / rho) * diff2;
      }
      row_sum[i] = acc;
    }
  };

  const std::size_t hw = std::thread::hardware_concurrency();
  const std::size_t workers = std::min<std::size_t>(std::max<std::size_t>(hw, 1), m);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) total += row_sum[i];
  return total;
}

}  // namespace

double fused_objective(const MlpNetwork& disc, const Batch& batch,
                       const MeasuringFunction& phi, const Embedding& psi,
                       double lambda, double rho) {
  validate_batch(batch);
  require(rho > 0.0, "fused_objective: rho must be positive");
  const std::size_t m = batch.x.shape[0];

  const Tensor dx = discriminator_forward(disc, batch.x);
  const Tensor dy = discriminator_forward(disc, batch.y);
  double payoff = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    payoff += phi.apply(dx.at(i, 0)) + phi.apply(1.0 - dy.at(i, 0));
  payoff /= static_cast<double>(m);

  double reg = 0.0;
  if (lambda != 0.0) {
    const Tensor px = psi.embed(batch.x);
    const Tensor py = psi.embed(batch.y);
    Tensor f({m, px.shape[1]});
    for (std::size_t i = 0; i < f.size(); ++i) f.at(i) = py.at(i) - px.at(i);
    reg = fused_pair_sum(batch.x, f, rho) / (static_cast<double>(m) * static_cast<double>(m));
  }
  return payoff + lambda * reg;
}

GapReport objective_gap(const GapConfig& config) {
  require(!config.m_values.empty(), "objective_gap: m_values must not be empty");
  for (std::size_t m : config.m_values)
    require(m >= 1, "objective_gap: every m must be >= 1");
  require(config.trials >= 2, "objective_gap: need at least two trials");
  require(config.model.affinity.rule == NeighborRule::kFull,
          "objective_gap: population pass supports the full affinity rule only");

  const std::size_t max_m =
      *std::max_element(config.m_values.begin(), config.m_values.end());
  const std::size_t pop_m =
      config.population_m != 0 ? config.population_m : 100 * max_m;
  require(pop_m >= max_m, "objective_gap: population_m must be >= max(m_values)");

  const TrainConfig& mc = config.model;
  Rng root(mc.seed);
  Rng gen_init = root.split(1);
  Rng disc_init = root.split(2);
  Rng pop_rng = root.split(3);

  const MlpNetwork gen = MlpNetwork::create(mc.gen_widths, mc.gen_hidden,
                                            Activation::kIdentity, gen_init);
  const MlpNetwork disc = MlpNetwork::create(mc.disc_widths, mc.disc_hidden,
                                             Activation::kSigmoid, disc_init);

  auto draw_batch = [&](std::size_t m, Rng& rng) {
    Batch b;
    b.x = sample_mixture(config.mixture, m, rng).samples;
    b.h = sample_latent(rng, mc.latent_dim, m);
    b.y = generator_forward(gen, b.h);
    return b;
  };

  const Batch population = draw_batch(pop_m, pop_rng);
  const double pop_value = fused_objective(disc, population, mc.phi, mc.psi,
                                           mc.lambda, mc.affinity.rho);

  GapReport report;
  report.population_m = pop_m;
  report.trials = config.trials;
  report.population_value = pop_value;

  for (std::size_t mi = 0; mi < config.m_values.size(); ++mi) {
    const std::size_t m = config.m_values[mi];
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t t = 0; t < config.trials; ++t) {
      Rng trial_rng = root.split(1000 + 1000 * mi + t);
      const Batch b = draw_batch(m, trial_rng);
      const double value =
          fused_objective(disc, b, mc.phi, mc.psi, mc.lambda, mc.affinity.rho);
      const double gap = std::abs(value - pop_value);
      sum += gap;
      sum_sq += gap * gap;
    }
    const double n = static_cast<double>(config.trials);
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    report.rows.push_back({m, mean, std::sqrt(var)});
  }
  return report;
}

}  // namespace mrgan
