#include "mrgan/train.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "mrgan/error.hpp"

namespace mrgan {

Tensor sample_latent(Rng& rng, std::size_t l, std::size_t count) {
  require(l >= 1, "sample_latent: latent dimension must be at least 1");
  Tensor h({count, l});
  for (double& v : h.data) v = rng.normal();
  return h;
}

std::vector<std::size_t> nearest_pairing(const Tensor& y, const Tensor& x) {
  require(y.rank() == 2 && x.rank() == 2 && y.same_shape(x),
          "nearest_pairing: batches must be rank-2 with equal shapes");
  const std::size_t m = y.shape[0];
  std::vector<std::size_t> chosen(m, 0);
  std::vector<bool> used(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    double best = 0.0;
    std::size_t best_j = m;
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      double dist = 0.0;
      for (std::size_t c = 0; c < y.shape[1]; ++c) {
        const double diff = y.at(i, c) - x.at(j, c);
        dist += diff * diff;
      }
      if (best_j == m || dist < best) {
        best = dist;
        best_j = j;
      }
    }
    chosen[i] = best_j;
    used[best_j] = true;
  }
  return chosen;
}

namespace {

void check_config(const TrainConfig& config, const Dataset& data) {
  require(config.batch_size >= 2, "train: batch size must be at least 2");
  require(config.iterations >= 1, "train: iteration budget must be at least 1");
  require(config.lambda >= 0.0, "train: lambda must be nonnegative");
  require(config.latent_dim >= 1, "train: latent dimension must be at least 1");
  require(data.size() >= 1, "train: dataset is empty");
  require(config.gen_widths.size() >= 2 && config.disc_widths.size() >= 2,
          "train: network widths too short");
  require(config.gen_widths.front() == config.latent_dim,
          "train: generator input width must equal the latent dimension");
  require(config.gen_widths.back() == data.dim(),
          "train: generator output width must equal the data dimension");
  require(config.disc_widths.front() == data.dim(),
          "train: discriminator input width must equal the data dimension");
  require(config.disc_widths.back() == 1,
          "train: discriminator output width must be 1");
  if (config.scheme == UpdateScheme::kAlternating)
    require(config.k_disc >= 1, "train: alternating scheme needs k_disc >= 1");
}

void ensure_finite_params(const MlpNetwork& net, const char* which) {
  for (double v : net.flat_params())
    if (!std::isfinite(v))
      fail(std::string(which) + " parameters became non-finite after the update");
}

}  // namespace

TrainResult train(const TrainConfig& config, const Dataset& data) {
  check_config(config, data);
  const std::size_t m = config.batch_size;
  const std::size_t d = data.dim();
  const std::size_t n = data.size();

  Rng root(config.seed);
  Rng rng_gen_init = root.split(1);
  Rng rng_disc_init = root.split(2);
  Rng rng_data = root.split(3);
  Rng rng_latent = root.split(4);

  TrainResult result;
  result.generator = MlpNetwork::create(config.gen_widths, config.gen_hidden,
                                        Activation::kIdentity, rng_gen_init);
  result.discriminator =
      MlpNetwork::create(config.disc_widths, config.disc_hidden,
                         Activation::kSigmoid, rng_disc_init);
  MlpNetwork& gen = result.generator;
  MlpNetwork& disc = result.discriminator;

  Optimizer gen_opt(config.gen_opt);
  Optimizer disc_opt(config.disc_opt);

  const auto start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&start]() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  };

  auto draw_batch = [&]() {
    Tensor x({m, d});
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t src = rng_data.uniform_index(n);
      std::copy(data.samples.data.begin() + src * d,
                data.samples.data.begin() + (src + 1) * d,
                x.data.begin() + i * d);
    }
    Batch b;
    b.h = sample_latent(rng_latent, config.latent_dim, m);
    b.y = gen.forward(b.h);
    if (config.nearest_pairing) {
      const std::vector<std::size_t> pick = nearest_pairing(b.y, x);
      Tensor paired({m, d});
      for (std::size_t i = 0; i < m; ++i)
        std::copy(x.data.begin() + pick[i] * d,
                  x.data.begin() + (pick[i] + 1) * d,
                  paired.data.begin() + i * d);
      b.x = std::move(paired);
    } else {
      b.x = std::move(x);
    }
    return b;
  };

  auto apply_disc_grads = [&](const std::vector<double>& grads) {
    std::vector<double> p = disc.flat_params();
    disc_opt.step(p, grads);
    disc.set_flat_params(p);
    if (config.clip > 0.0) disc.clip_weights(config.clip);
    ensure_finite_params(disc, "discriminator");
  };

  auto apply_gen_grads = [&](const std::vector<double>& grads) {
    std::vector<double> p = gen.flat_params();
    gen_opt.step(p, grads);
    gen.set_flat_params(p);
    if (config.project_generator_unit_ball) project_params_unit_ball(gen);
    ensure_finite_params(gen, "generator");
  };

  // parameters most recently confirmed by a fully finite loss evaluation
  std::vector<double> good_gen = gen.flat_params();
  std::vector<double> good_disc = disc.flat_params();

  for (std::size_t it = 1; it <= config.iterations; ++it) {
    HistoryRecord rec;
    rec.iter = it;
    try {
      if (config.scheme == UpdateScheme::kAlternating) {
        for (std::size_t s = 0; s < config.k_disc; ++s) {
          const Batch b = draw_batch();
          Tape dt;
          DiscriminatorLossGraph dg =
              discriminator_loss_graph(dt, disc, b, config.phi);
          dt.backward(dg.loss);
          apply_disc_grads(disc.read_flat_grads(dt, dg.disc_params));
        }
        const Batch b = draw_batch();
        const AffinityGraph w = affinity_weights(b.x, config.affinity);
        Tape gt;
        GeneratorLossGraph gg = generator_loss_graph(
            gt, gen, disc, b, config.phi, config.psi, w, config.lambda);
        gt.backward(gg.loss);

        rec.gen_loss = gt.scalar_value(gg.loss);
        rec.regularizer = gt.scalar_value(gg.regularizer);
        const double payoff = discriminator_payoff(disc, b, config.phi);
        rec.disc_loss = -payoff;
        rec.objective = payoff + config.lambda * rec.regularizer;
        const Tensor dx = discriminator_forward(disc, b.x);
        const Tensor dy = discriminator_forward(disc, b.y);
        double sx = 0.0, sy = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          sx += dx.at(i, 0);
          sy += dy.at(i, 0);
        }
        rec.mean_d_real = sx / static_cast<double>(m);
        rec.mean_d_fake = sy / static_cast<double>(m);

        good_gen = gen.flat_params();
        good_disc = disc.flat_params();
        apply_gen_grads(gen.read_flat_grads(gt, gg.gen_params));
      } else {
        const Batch b = draw_batch();
        const AffinityGraph w = affinity_weights(b.x, config.affinity);
        Tape gt;
        GeneratorLossGraph gg = generator_loss_graph(
            gt, gen, disc, b, config.phi, config.psi, w, config.lambda);
        gt.backward(gg.loss);
        Tape dt;
        DiscriminatorLossGraph dg =
            discriminator_loss_graph(dt, disc, b, config.phi);
        dt.backward(dg.loss);

        rec.gen_loss = gt.scalar_value(gg.loss);
        rec.regularizer = gt.scalar_value(gg.regularizer);
        rec.disc_loss = dt.scalar_value(dg.loss);
        rec.objective =
            dt.scalar_value(dg.payoff) + config.lambda * rec.regularizer;
        rec.mean_d_real = dt.scalar_value(dg.mean_d_real);
        rec.mean_d_fake = dt.scalar_value(dg.mean_d_fake);

        // both gradients are taken at the same (u, v) before either moves
        good_gen = gen.flat_params();
        good_disc = disc.flat_params();
        apply_gen_grads(gen.read_flat_grads(gt, gg.gen_params));
        apply_disc_grads(disc.read_flat_grads(dt, dg.disc_params));
      }
    } catch (const Error& e) {
      gen.set_flat_params(good_gen);
      disc.set_flat_params(good_disc);
      result.aborted = true;
      result.abort_iteration = it;
      result.abort_reason = e.what();
      break;
    }

    if (it == 1 || it % config.log_every == 0 || it == config.iterations) {
      if (result.history.records.empty() ||
          result.history.records.back().iter != it) {
        rec.wall_ms = elapsed_ms();
        result.history.records.push_back(rec);
      }
    }
  }
  return result;
}

void write_history_csv(const TrainHistory& history, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "cannot open history file for writing: " + path);
  out << "iter,objective,gen_loss,disc_loss,regularizer,mean_D_real,"
         "mean_D_fake,wall_ms\n";
  char buf[40];
  auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const HistoryRecord& r : history.records) {
    out << r.iter << "," << fmt(r.objective) << "," << fmt(r.gen_loss) << ","
        << fmt(r.disc_loss) << "," << fmt(r.regularizer) << ","
        << fmt(r.mean_d_real) << "," << fmt(r.mean_d_fake) << ",";
    std::snprintf(buf, sizeof(buf), "%.3f", r.wall_ms);
    out << buf << "\n";
  }
  require(out.good(), "failed writing history: " + path);
}

}  // namespace mrgan
