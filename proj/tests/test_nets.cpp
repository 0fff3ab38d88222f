#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "mrgan/embedding.hpp"
#include "mrgan/error.hpp"
#include "mrgan/finite_diff.hpp"
#include "mrgan/net.hpp"
#include "mrgan/objective.hpp"
#include "mrgan/optimizer.hpp"
#include "mrgan/rng.hpp"

using namespace mrgan;

namespace {

Tensor row(std::initializer_list<double> vals) {
  Tensor t({1, vals.size()});
  std::size_t i = 0;
  for (double v : vals) t.data[i++] = v;
  return t;
}

Tensor random_rows(std::size_t n, std::size_t d, Rng& rng, double scale = 1.0) {
  Tensor t({n, d});
  for (double& v : t.data) v = rng.uniform(-scale, scale);
  return t;
}

// Best rank-1 linear reconstruction error, via power iteration on the
// centered covariance. Independent reference for the autoencoder test.
double pca_rank1_error(const Tensor& data) {
  const std::size_t n = data.shape[0], d = data.shape[1];
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c) mean[c] += data.at(i, c) / n;
  std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        cov[a][b] += (data.at(i, a) - mean[a]) * (data.at(i, b) - mean[b]) / n;
  std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
  for (int it = 0; it < 500; ++it) {
    std::vector<double> w(d, 0.0);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) w[a] += cov[a][b] * v[b];
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    for (std::size_t a = 0; a < d; ++a) v[a] = w[a] / norm;
  }
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double proj = 0.0;
    for (std::size_t c = 0; c < d; ++c) proj += (data.at(i, c) - mean[c]) * v[c];
    for (std::size_t c = 0; c < d; ++c) {
      const double recon = mean[c] + proj * v[c];
      const double diff = data.at(i, c) - recon;
      err += diff * diff;
    }
  }
  return err / static_cast<double>(n * d);
}

}  // namespace

TEST_CASE("zero network with identity output maps to zero") {
  Rng rng(1);
  MlpNetwork gen = MlpNetwork::create({2, 4, 3}, Activation::kTanh,
                                      Activation::kIdentity, rng);
  gen.set_flat_params(std::vector<double>(gen.param_count(), 0.0));
  Tensor out = generator_forward(gen, row({0.7, -0.3}));
  for (double v : out.data) CHECK(v == 0.0);
}

TEST_CASE("single linear layer computes W h + b") {
  Rng rng(2);
  MlpNetwork net = MlpNetwork::create({2, 2}, Activation::kTanh,
                                      Activation::kIdentity, rng);
  // W = [[1,2],[3,4]] (in x out), b = (5, 6)
  net.set_flat_params({1, 2, 3, 4, 5, 6});
  Tensor out = net.forward(row({10, 100}));
  CHECK(out.at(0, 0) == doctest::Approx(1 * 10 + 3 * 100 + 5));
  CHECK(out.at(0, 1) == doctest::Approx(2 * 10 + 4 * 100 + 6));
}

TEST_CASE("width mismatches are rejected") {
  Rng rng(3);
  MlpNetwork gen = MlpNetwork::create({2, 4, 3}, Activation::kTanh,
                                      Activation::kIdentity, rng);
  CHECK_THROWS_AS(generator_forward(gen, row({1, 2, 3})), Error);
  MlpNetwork disc = MlpNetwork::create({3, 4, 1}, Activation::kTanh,
                                       Activation::kSigmoid, rng);
  CHECK_THROWS_AS(discriminator_forward(disc, row({1, 2})), Error);
}

TEST_CASE("initialization stays within the fan-in bound and depends on seed") {
  Rng rng(4);
  MlpNetwork net = MlpNetwork::create({9, 5}, Activation::kTanh,
                                      Activation::kIdentity, rng);
  const double s = 1.0 / 3.0;
  for (double v : net.flat_params()) {
    CHECK(v >= -s);
    CHECK(v <= s);
  }
  Rng rng2(5);
  MlpNetwork other = MlpNetwork::create({9, 5}, Activation::kTanh,
                                        Activation::kIdentity, rng2);
  CHECK(net.flat_params() != other.flat_params());
}

TEST_CASE("discriminator outputs live strictly inside (0,1)") {
  Rng rng(6);
  MlpNetwork disc = MlpNetwork::create({3, 8, 1}, Activation::kTanh,
                                       Activation::kSigmoid, rng);
  SUBCASE("zero parameters give exactly one half") {
    disc.set_flat_params(std::vector<double>(disc.param_count(), 0.0));
    Tensor out = discriminator_forward(disc, row({0.3, -0.9, 2.0}));
    CHECK(out.at(0, 0) == 0.5);
  }
  SUBCASE("large final pre-activation saturates toward one") {
    std::vector<double> p(disc.param_count(), 0.0);
    p.back() = 30.0;  // output bias
    disc.set_flat_params(p);
    Tensor out = discriminator_forward(disc, row({0.3, -0.9, 2.0}));
    CHECK(out.at(0, 0) > 1.0 - 1e-9);
    CHECK(out.at(0, 0) < 1.0);
  }
  SUBCASE("random parameters stay in range") {
    Tensor x = random_rows(32, 3, rng, 3.0);
    Tensor out = discriminator_forward(disc, x);
    for (double v : out.data) {
      CHECK(v > 0.0);
      CHECK(v < 1.0);
    }
  }
  SUBCASE("identity-output network is rejected as discriminator") {
    MlpNetwork bad = MlpNetwork::create({3, 8, 1}, Activation::kTanh,
                                        Activation::kIdentity, rng);
    CHECK_THROWS_AS(discriminator_forward(bad, row({1, 2, 3})), Error);
  }
}

TEST_CASE("tape forward agrees with the plain forward bit for bit") {
  Rng rng(7);
  MlpNetwork net = MlpNetwork::create({3, 16, 16, 2}, Activation::kTanh,
                                      Activation::kIdentity, rng);
  Tensor x = random_rows(6, 3, rng);
  Tensor direct = net.forward(x);

  Tape tape;
  TapeParams params = net.bind(tape, "net");
  Var out = net.forward_tape(tape, params, tape.constant(x));
  Tape tape2;
  Var out2 = net.forward_tape_frozen(tape2, tape2.constant(x));

  REQUIRE(tape.value(out).size() == direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i) {
    CHECK(std::memcmp(&tape.value(out).data[i], &direct.data[i], 8) == 0);
    CHECK(std::memcmp(&tape2.value(out2).data[i], &direct.data[i], 8) == 0);
  }
}

TEST_CASE("clip_weights clamps and is idempotent") {
  Rng rng(8);
  MlpNetwork net = MlpNetwork::create({4, 4}, Activation::kTanh,
                                      Activation::kIdentity, rng);
  net.set_flat_params({5.0, -5.0, 0.005, -0.005, 0.2, 0.01, -0.01, 0.0,
                       1.0, -1.0, 0.002, 0.5, 0.01, 0.01, -0.3, 0.0,
                       0.1, -0.1, 0.0, 0.0});
  MlpNetwork unclipped = net;
  net.clip_weights(0.01);
  for (double v : net.flat_params()) {
    CHECK(v <= 0.01);
    CHECK(v >= -0.01);
  }
  CHECK(net.flat_params()[0] == 0.01);
  MlpNetwork twice = net;
  twice.clip_weights(0.01);
  CHECK(twice.flat_params() == net.flat_params());

  unclipped.clip_weights(100.0);
  CHECK(unclipped.flat_params()[0] == 5.0);
}

TEST_CASE("project_unit_ball projects radially") {
  Tensor p({2});
  p.data = {3.0, 4.0};
  Tensor q = project_unit_ball(p);
  CHECK(q.data[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(q.data[1] == doctest::Approx(0.8).epsilon(1e-12));

  Tensor small({2});
  small.data = {0.3, 0.4};
  Tensor r = project_unit_ball(small);
  CHECK(r.data == small.data);

  Tensor again = project_unit_ball(q);
  CHECK(std::fabs(again.data[0] - q.data[0]) <= 1e-15);
  CHECK(std::fabs(again.data[1] - q.data[1]) <= 1e-15);

  Rng rng(9);
  MlpNetwork net = MlpNetwork::create({3, 8, 1}, Activation::kTanh,
                                      Activation::kSigmoid, rng);
  std::vector<double> big(net.param_count(), 1.0);
  net.set_flat_params(big);
  project_params_unit_ball(net);
  double norm = 0.0;
  for (double v : net.flat_params()) norm += v * v;
  CHECK(norm <= 1.0 + 1e-12);
}

TEST_CASE("checkpoint json round trip preserves every bit") {
  Rng rng(10);
  MlpNetwork net = MlpNetwork::create({2, 32, 32, 3}, Activation::kTanh,
                                      Activation::kIdentity, rng);
  const std::string path = "net_roundtrip_test.json";
  net.save(path);
  MlpNetwork back = MlpNetwork::load(path);
  CHECK(back.widths() == net.widths());
  CHECK(back.hidden_activation() == net.hidden_activation());
  CHECK(back.output_activation() == net.output_activation());
  const auto a = net.flat_params();
  const auto b = back.flat_params();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(std::memcmp(&a[i], &b[i], 8) == 0);
  CHECK(back.to_json().dump() == net.to_json().dump());
  std::remove(path.c_str());
}

TEST_CASE("identity embedding returns its input unchanged") {
  Rng rng(11);
  Embedding psi = Embedding::identity();
  Tensor x = random_rows(5, 3, rng);
  Tensor e = psi.embed(x);
  CHECK(e.shape == x.shape);
  CHECK(e.data == x.data);
}

TEST_CASE("kernel embedding with one center at x evaluates to its coefficient") {
  Tensor center({1, 2});
  center.data = {0.4, -0.2};
  Tensor alpha({1});
  alpha.data = {1.0};
  Embedding psi = Embedding::kernel(center, alpha, 1.0);
  Tensor out = psi.embed(center);
  CHECK(out.at(0, 0) == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(Embedding::kernel(Tensor({0, 2}), Tensor({0}), 1.0), Error);
  CHECK_THROWS_AS(Embedding::kernel(center, alpha, 0.0), Error);
}

TEST_CASE("embed_tape matches embed and its x-gradient matches differences") {
  Rng rng(12);
  Tensor x0 = random_rows(4, 3, rng);

  std::vector<Embedding> variants;
  Tensor centers = random_rows(6, 3, rng);
  Tensor alpha({6});
  for (double& v : alpha.data) v = rng.uniform(-1.0, 1.0);
  variants.push_back(Embedding::kernel(centers, alpha, 2.0));
  MlpNetwork enc = MlpNetwork::create({3, 5, 2}, Activation::kTanh,
                                      Activation::kIdentity, rng);
  MlpNetwork dec = MlpNetwork::create({2, 5, 3}, Activation::kTanh,
                                      Activation::kIdentity, rng);
  variants.push_back(Embedding::autoencoder(enc, dec));
  variants.push_back(Embedding::identity());

  for (const Embedding& psi : variants) {
    Tensor direct = psi.embed(x0);
    Tape tape;
    Var x = tape.input("x", x0);
    Var e = psi.embed_tape(tape, x);
    REQUIRE(tape.value(e).shape == direct.shape);
    for (std::size_t i = 0; i < direct.size(); ++i)
      CHECK(tape.value(e).data[i] ==
            doctest::Approx(direct.data[i]).epsilon(1e-12));

    Var root = tape.mean(tape.square(e));
    tape.backward(root);
    Tensor fd = finite_diff_grad(
        [&](const Tensor& xt) {
          Tensor emb = psi.embed(xt);
          double acc = 0.0;
          for (double v : emb.data) acc += v * v;
          return acc / static_cast<double>(emb.size());
        },
        x0, 1e-5);
    CHECK(max_rel_error(tape.adjoint(x).data, fd.data) <= 1e-6);
  }
}

TEST_CASE("autoencoder factory enforces the dimension-reduction contract") {
  Rng rng(13);
  MlpNetwork enc = MlpNetwork::create({3, 4, 3}, Activation::kTanh,
                                      Activation::kIdentity, rng);
  MlpNetwork dec = MlpNetwork::create({3, 4, 3}, Activation::kTanh,
                                      Activation::kIdentity, rng);
  CHECK_THROWS_AS(Embedding::autoencoder(enc, dec), Error);
}

TEST_CASE("autoencoder pretraining recovers a linear manifold") {
  Rng rng(14);
  const std::size_t n = 256;
  Tensor data({n, 3});
  const double dir[3] = {0.6, -0.64, 0.48};  // unit vector
  for (std::size_t i = 0; i < n; ++i) {
    const double t = rng.uniform(-1.0, 1.0);
    data.at(i, 0) = 0.1 + t * dir[0];
    data.at(i, 1) = -0.2 + t * dir[1];
    data.at(i, 2) = 0.05 + t * dir[2];
  }
  const double pca_err = pca_rank1_error(data);
  CHECK(pca_err < 1e-10);

  PretrainStats stats;
  Embedding psi = pretrain_autoencoder(data, {3, 16, 1}, 3000,
                                       OptimizerConfig::adam(1e-2), rng, &stats);
  CHECK(stats.final_loss < stats.initial_loss);
  CHECK(stats.final_loss < 1e-2);
  CHECK(reconstruction_error(psi, data) == doctest::Approx(stats.final_loss));
}

TEST_CASE("autoencoder pretraining improves on random gaussian data") {
  Rng rng(15);
  Tensor data({128, 4});
  for (double& v : data.data) v = rng.normal() * 0.5;
  PretrainStats stats;
  pretrain_autoencoder(data, {4, 8, 3}, 400, OptimizerConfig::adam(1e-2), rng,
                       &stats);
  CHECK(stats.final_loss < stats.initial_loss);
}

TEST_CASE("autoencoder pretraining drives a constant dataset to near zero") {
  Rng rng(16);
  Tensor data({64, 3});
  for (std::size_t i = 0; i < 64; ++i) {
    data.at(i, 0) = 0.25;
    data.at(i, 1) = -0.5;
    data.at(i, 2) = 0.75;
  }
  PretrainStats stats;
  pretrain_autoencoder(data, {3, 8, 1}, 2000, OptimizerConfig::adam(1e-2), rng,
                       &stats);
  CHECK(stats.final_loss < 1e-4);
}

TEST_CASE("autoencoder pretraining validates its inputs") {
  Rng rng(17);
  Tensor empty({0, 3});
  CHECK_THROWS_AS(pretrain_autoencoder(empty, {3, 2}, 10,
                                       OptimizerConfig::adam(1e-3), rng),
                  Error);
  Tensor data({4, 3});
  CHECK_THROWS_AS(pretrain_autoencoder(data, {3, 3}, 10,
                                       OptimizerConfig::adam(1e-3), rng),
                  Error);
}

TEST_CASE("kernel fit with lambda zero returns the disc-term mean") {
  Rng rng(18);
  Tensor x = random_rows(4, 2, rng);
  Tensor y = random_rows(4, 2, rng);
  AffinityGraph w = affinity_weights(x, {1.0, NeighborRule::kFull, 8});
  std::vector<double> disc = {0.1, 0.2, 0.3, 0.4};
  KernelFitResult fit = fit_kernel_embedding(x, y, disc, w, 0.0, 1.0, 50, rng);
  CHECK(fit.objective == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("kernel fit on a paired-identity batch ignores alpha") {
  Rng rng(19);
  Tensor x = random_rows(5, 2, rng);
  AffinityGraph w = affinity_weights(x, {1.0, NeighborRule::kFull, 8});
  std::vector<double> disc = {0.5, 0.5, 0.5, 0.5, 0.5};
  KernelFitResult fit = fit_kernel_embedding(x, x, disc, w, 3.0, 1.0, 50, rng);
  CHECK(fit.objective == doctest::Approx(0.5).epsilon(1e-12));
  // regularizer is identically zero whatever the coefficients
  Tensor weird({5});
  weird.data = {4.0, -3.0, 2.0, -1.0, 0.5};
  CHECK(kernel_fit_objective(x, x, disc, w, 3.0, 1.0, weird) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("kernel fit never scores worse than zero coefficients") {
  Rng rng(20);
  for (int trial = 0; trial < 5; ++trial) {
    Tensor x = random_rows(6, 2, rng);
    Tensor y = random_rows(6, 2, rng);
    AffinityGraph w = affinity_weights(x, {2.0, NeighborRule::kFull, 8});
    std::vector<double> disc(6, 0.3);
    KernelFitResult fit =
        fit_kernel_embedding(x, y, disc, w, 1.5, 1.0, 100, rng);
    const double at_zero =
        kernel_fit_objective(x, y, disc, w, 1.5, 1.0, Tensor::zeros({6, 1}));
    CHECK(fit.objective <= at_zero + 1e-12);
  }
}

TEST_CASE("kernel fit matches an exhaustive grid search at m = 2") {
  Rng rng(21);
  Tensor x({2, 2});
  x.data = {0.0, 0.0, 1.0, 0.0};
  Tensor y({2, 2});
  y.data = {0.5, 0.5, 1.5, -0.2};
  AffinityGraph w = affinity_weights(x, {1.0, NeighborRule::kFull, 8});
  std::vector<double> disc = {0.3, 0.6};
  const double lambda = 2.0, scale = 1.0;

  double grid_best = 1e100;
  Tensor alpha({2, 1});
  for (int i = -200; i <= 200; ++i) {
    for (int j = -200; j <= 200; ++j) {
      alpha.data[0] = i * 0.01;
      alpha.data[1] = j * 0.01;
      grid_best = std::min(
          grid_best, kernel_fit_objective(x, y, disc, w, lambda, scale, alpha));
    }
  }

  KernelFitResult fit =
      fit_kernel_embedding(x, y, disc, w, lambda, scale, 500, rng);
  CHECK(std::fabs(fit.objective - grid_best) <= 1e-3);

  CHECK_THROWS_AS(fit_kernel_embedding(x, y, disc, w, lambda, -1.0, 10, rng),
                  Error);
}

TEST_CASE("sgd step moves against the gradient") {
  Optimizer opt(OptimizerConfig::sgd(0.1));
  std::vector<double> p = {0.0, 0.0};
  opt.step(p, {1.0, 1.0});
  CHECK(p[0] == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(-0.1).epsilon(1e-15));
}

TEST_CASE("adam first step matches the hand-evaluated recurrence") {
  OptimizerConfig cfg = OptimizerConfig::adam(0.1);
  Optimizer opt(cfg);
  std::vector<double> p = {1.0};
  const double g = 0.5;
  opt.step(p, {g});
  const double m1 = (1.0 - cfg.beta1) * g;
  const double v1 = (1.0 - cfg.beta2) * g * g;
  const double mhat = m1 / (1.0 - cfg.beta1);
  const double vhat = v1 / (1.0 - cfg.beta2);
  const double expect = 1.0 - cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps_adam);
  CHECK(p[0] == doctest::Approx(expect).epsilon(1e-15));
  // near -lr for any nonzero gradient on the first step
  CHECK(std::fabs((p[0] - 1.0) + cfg.lr) <= 1e-8);
}

TEST_CASE("zero gradient leaves parameters fixed while moments decay") {
  Optimizer fresh(OptimizerConfig::adam(0.1));
  std::vector<double> p = {2.0};
  fresh.step(p, {0.0});
  CHECK(p[0] == 2.0);

  Optimizer adam(OptimizerConfig::adam(0.1));
  std::vector<double> q = {2.0};
  adam.step(q, {1.0});
  const double m1 = adam.first_moment()[0];
  const double v1 = adam.second_moment()[0];
  adam.step(q, {0.0});
  CHECK(adam.first_moment()[0] == doctest::Approx(0.9 * m1).epsilon(1e-12));
  CHECK(adam.second_moment()[0] == doctest::Approx(0.999 * v1).epsilon(1e-12));

  Optimizer rms(OptimizerConfig::rmsprop(0.1));
  std::vector<double> r = {2.0};
  rms.step(r, {1.0});
  const double r_after = r[0];
  const double vr = rms.second_moment()[0];
  rms.step(r, {0.0});
  CHECK(r[0] == r_after);
  CHECK(rms.second_moment()[0] == doctest::Approx(0.9 * vr).epsilon(1e-12));
}

TEST_CASE("rmsprop divides by the root of the running mean square") {
  OptimizerConfig cfg = OptimizerConfig::rmsprop(0.01);
  Optimizer opt(cfg);
  std::vector<double> p = {2.0};
  opt.step(p, {1.0});
  const double v = (1.0 - cfg.decay) * 1.0;
  CHECK(p[0] == doctest::Approx(2.0 - cfg.lr / std::sqrt(v + cfg.eps_rms))
                    .epsilon(1e-12));
}

TEST_CASE("optimizer rejects mismatched shapes") {
  Optimizer opt(OptimizerConfig::sgd(0.1));
  std::vector<double> p = {0.0, 0.0};
  CHECK_THROWS_AS(opt.step(p, {1.0}), Error);
}
