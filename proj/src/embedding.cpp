#include "mrgan/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrgan/error.hpp"
#include "mrgan/objective.hpp"

namespace mrgan {

namespace {

Tensor as_column(Tensor t) {
  if (t.rank() == 1) t.shape = {t.shape[0], 1};
  return t;
}

// G[i][j] = exp(-|a_i - b_j|^2 / scale)
Tensor gaussian_gram(const Tensor& a, const Tensor& b, double scale) {
  const std::size_t n = a.shape[0], m = b.shape[0], d = a.shape[1];
  Tensor g({n, m});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double dist = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = a.at(i, c) - b.at(j, c);
        dist += diff * diff;
      }
      g.at(i, j) = std::exp(-dist / scale);
    }
  }
  return g;
}

}  // namespace

Embedding Embedding::identity() { return Embedding(); }

Embedding Embedding::autoencoder(MlpNetwork encoder, MlpNetwork decoder) {
  require(encoder.out_dim() < encoder.in_dim(),
          "autoencoder embedding must reduce dimension: encoder maps " +
              std::to_string(encoder.in_dim()) + " -> " +
              std::to_string(encoder.out_dim()));
  require(decoder.in_dim() == encoder.out_dim() &&
              decoder.out_dim() == encoder.in_dim(),
          "decoder widths must mirror the encoder");
  Embedding e;
  e.kind_ = EmbeddingKind::kAutoencoder;
  e.encoder_ = std::move(encoder);
  e.decoder_ = std::move(decoder);
  return e;
}

Embedding Embedding::kernel(Tensor centers, Tensor coefficients, double scale) {
  require(centers.rank() == 2 && centers.shape[0] >= 1,
          "kernel embedding needs at least one center");
  require(scale > 0.0, "kernel embedding scale must be positive");
  coefficients = as_column(std::move(coefficients));
  require(coefficients.rank() == 2 && coefficients.shape[1] == 1 &&
              coefficients.shape[0] == centers.shape[0],
          "kernel embedding needs one coefficient per center");
  Embedding e;
  e.kind_ = EmbeddingKind::kKernel;
  e.centers_ = std::move(centers);
  e.coefficients_ = std::move(coefficients);
  e.kernel_scale_ = scale;
  return e;
}

std::size_t Embedding::out_dim(std::size_t input_dim) const {
  switch (kind_) {
    case EmbeddingKind::kIdentity: return input_dim;
    case EmbeddingKind::kAutoencoder: return encoder_.out_dim();
    case EmbeddingKind::kKernel: return 1;
  }
  return input_dim;
}

Tensor Embedding::embed(const Tensor& x) const {
  require(x.rank() == 2, "embed: input must be rank 2");
  switch (kind_) {
    case EmbeddingKind::kIdentity:
      return x;
    case EmbeddingKind::kAutoencoder:
      return encoder_.forward(x);
    case EmbeddingKind::kKernel: {
      require(x.shape[1] == centers_.shape[1],
              "embed: sample width does not match kernel centers");
      const Tensor g = gaussian_gram(x, centers_, kernel_scale_);
      const std::size_t n = x.shape[0], mc = centers_.shape[0];
      Tensor out({n, 1});
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < mc; ++j)
          acc += g.at(i, j) * coefficients_.at(j, 0);
        out.at(i, 0) = acc;
      }
      return out;
    }
  }
  return x;
}

Var Embedding::embed_tape(Tape& tape, Var x) const {
  switch (kind_) {
    case EmbeddingKind::kIdentity:
      return x;
    case EmbeddingKind::kAutoencoder:
      return encoder_.forward_tape_frozen(tape, x);
    case EmbeddingKind::kKernel: {
      const Tensor& xv = tape.value(x);
      require(xv.rank() == 2 && xv.shape[1] == centers_.shape[1],
              "embed_tape: sample width does not match kernel centers");
      const std::size_t d = centers_.shape[1], mc = centers_.shape[0];

      // |x_i - c_j|^2 = |x_i|^2 + |c_j|^2 - 2 x_i.c_j, assembled with
      // broadcast adds so gradients flow through x.
      Var sx = tape.matmul(tape.mul(x, x), tape.constant(Tensor::full({d, 1}, 1.0)));
      Tensor ct({d, mc});
      Tensor sc({mc});
      for (std::size_t j = 0; j < mc; ++j) {
        double norm = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
          ct.at(c, j) = centers_.at(j, c);
          norm += centers_.at(j, c) * centers_.at(j, c);
        }
        sc.data[j] = norm;
      }
      Var cross = tape.matmul(x, tape.constant(ct));
      Var dist = tape.add_col_vec(
          tape.add_row_vec(tape.mul_scalar(cross, -2.0), tape.constant(sc)), sx);
      Var k = tape.exp(tape.mul_scalar(dist, -1.0 / kernel_scale_));
      return tape.matmul(k, tape.constant(coefficients_));
    }
  }
  return x;
}

double reconstruction_error(const Embedding& embedding, const Tensor& data) {
  require(embedding.kind() == EmbeddingKind::kAutoencoder,
          "reconstruction_error: embedding is not an autoencoder");
  const Tensor recon = embedding.decoder().forward(embedding.encoder().forward(data));
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double diff = recon.data[i] - data.data[i];
    acc += diff * diff;
  }
  return acc / static_cast<double>(data.size());
}

Embedding pretrain_autoencoder(const Tensor& data,
                               const std::vector<std::size_t>& encoder_widths,
                               std::size_t iters, const OptimizerConfig& optimizer,
                               Rng& rng, PretrainStats* stats) {
  require(data.rank() == 2 && data.shape[0] >= 1,
          "pretrain_autoencoder: need at least one sample");
  const std::size_t n = data.shape[0], d = data.shape[1];
  require(encoder_widths.size() >= 2, "pretrain_autoencoder: widths too short");
  require(encoder_widths.front() == d,
          "pretrain_autoencoder: encoder input width must equal data dimension");
  require(encoder_widths.back() < d,
          "pretrain_autoencoder: bottleneck must be narrower than the data");

  std::vector<std::size_t> decoder_widths(encoder_widths.rbegin(),
                                          encoder_widths.rend());
  MlpNetwork enc = MlpNetwork::create(encoder_widths, Activation::kTanh,
                                      Activation::kIdentity, rng);
  MlpNetwork dec = MlpNetwork::create(decoder_widths, Activation::kTanh,
                                      Activation::kIdentity, rng);

  const std::size_t eval_n = std::min<std::size_t>(n, 512);
  Tensor eval_set({eval_n, d});
  std::copy(data.data.begin(), data.data.begin() + eval_n * d,
            eval_set.data.begin());

  auto eval_loss = [&](const MlpNetwork& e, const MlpNetwork& g) {
    return reconstruction_error(Embedding::autoencoder(e, g), eval_set);
  };

  const double initial = eval_loss(enc, dec);
  double best = initial;
  MlpNetwork best_enc = enc, best_dec = dec;

  const std::size_t batch_size = std::min<std::size_t>(n, 128);
  Optimizer opt(optimizer);
  const std::size_t enc_count = enc.param_count();

  for (std::size_t it = 0; it < iters; ++it) {
    Tensor xb({batch_size, d});
    for (std::size_t i = 0; i < batch_size; ++i) {
      const std::size_t src = rng.uniform_index(n);
      std::copy(data.data.begin() + src * d, data.data.begin() + (src + 1) * d,
                xb.data.begin() + i * d);
    }

    Tape tape;
    TapeParams pe = enc.bind(tape, "enc");
    TapeParams pd = dec.bind(tape, "dec");
    Var x = tape.constant(xb);
    Var recon = dec.forward_tape(tape, pd, enc.forward_tape(tape, pe, x));
    Var loss = tape.mean(tape.square(tape.sub(recon, x)));
    tape.backward(loss);

    std::vector<double> params = enc.flat_params();
    const std::vector<double> dec_params = dec.flat_params();
    params.insert(params.end(), dec_params.begin(), dec_params.end());
    std::vector<double> grads = enc.read_flat_grads(tape, pe);
    const std::vector<double> dec_grads = dec.read_flat_grads(tape, pd);
    grads.insert(grads.end(), dec_grads.begin(), dec_grads.end());

    opt.step(params, grads);
    enc.set_flat_params({params.begin(), params.begin() + enc_count});
    dec.set_flat_params({params.begin() + enc_count, params.end()});

    if ((it + 1) % 50 == 0 || it + 1 == iters) {
      const double current = eval_loss(enc, dec);
      if (current < best) {
        best = current;
        best_enc = enc;
        best_dec = dec;
      }
    }
  }

  if (stats) {
    stats->initial_loss = initial;
    stats->final_loss = best;
  }
  return Embedding::autoencoder(std::move(best_enc), std::move(best_dec));
}

double kernel_fit_objective(const Tensor& x, const Tensor& y,
                            const std::vector<double>& disc_terms,
                            const AffinityGraph& w, double lambda,
                            double kernel_scale, const Tensor& alpha) {
  double disc_mean = 0.0;
  for (double t : disc_terms) disc_mean += t;
  disc_mean /= static_cast<double>(disc_terms.size());
  const Embedding psi = Embedding::kernel(x, alpha, kernel_scale);
  return disc_mean + lambda * manifold_regularizer(x, y, psi, w);
}

KernelFitResult fit_kernel_embedding(const Tensor& x, const Tensor& y,
                                     const std::vector<double>& disc_terms,
                                     const AffinityGraph& w, double lambda,
                                     double kernel_scale, std::size_t iters,
                                     Rng& rng) {
  require(x.rank() == 2 && y.rank() == 2 && x.same_shape(y),
          "fit_kernel_embedding: x and y must be rank-2 with equal shapes");
  const std::size_t m = x.shape[0];
  require(m >= 2, "fit_kernel_embedding: need at least 2 paired samples");
  require(disc_terms.size() == m,
          "fit_kernel_embedding: one discriminator term per sample required");
  require(kernel_scale > 0.0,
          "fit_kernel_embedding: kernel scale must be positive, got " +
              std::to_string(kernel_scale));
  require(lambda >= 0.0, "fit_kernel_embedding: lambda must be nonnegative");
  require(w.size() == m, "fit_kernel_embedding: affinity size mismatch");

  Tensor alpha({m, 1});
  for (double& v : alpha.data) v = rng.uniform(-0.1, 0.1);

  // psi(y_i) - psi(x_i) = [K_y - K_x] alpha with both grams over centers = x.
  const Tensor kx = gaussian_gram(x, x, kernel_scale);
  const Tensor ky = gaussian_gram(y, x, kernel_scale);
  Tensor kdiff({m, m});
  for (std::size_t i = 0; i < m * m; ++i)
    kdiff.data[i] = ky.data[i] - kx.data[i];

  Tape tape;
  Var a = tape.input("alpha", alpha);
  Var f = tape.matmul(tape.constant(kdiff), a);
  Var reg = regularizer_graph(tape, f, w);
  Var root = tape.mul_scalar(reg, lambda);

  auto score = [&](const Tensor& candidate) {
    return kernel_fit_objective(x, y, disc_terms, w, lambda, kernel_scale,
                                candidate);
  };

  Tensor best_alpha = Tensor::zeros({m, 1});
  double best = score(best_alpha);
  if (score(alpha) < best) {
    best = score(alpha);
    best_alpha = alpha;
  }

  Optimizer opt(OptimizerConfig::adam(0.05));
  for (std::size_t it = 0; it < iters; ++it) {
    tape.rebind("alpha", alpha);
    tape.replay();
    tape.backward(root);
    std::vector<double> params = alpha.data;
    opt.step(params, tape.adjoint(a).data);
    alpha.data = params;
    if ((it + 1) % 10 == 0 || it + 1 == iters) {
      const double current = score(alpha);
      if (current < best) {
        best = current;
        best_alpha = alpha;
      }
    }
  }

  KernelFitResult result;
  result.embedding = Embedding::kernel(x, best_alpha, kernel_scale);
  result.objective = best;
  return result;
}

}  // namespace mrgan
