#pragma once

#include <cstddef>
#include <vector>

#include "mrgan/affinity.hpp"
#include "mrgan/net.hpp"
#include "mrgan/optimizer.hpp"
#include "mrgan/rng.hpp"
#include "mrgan/tape.hpp"
#include "mrgan/tensor.hpp"

namespace mrgan {

enum class EmbeddingKind { kIdentity, kAutoencoder, kKernel };

// Embedding psi mapping samples into the coordinates the manifold regularizer
// measures distances in. Variants:
//   identity     psi(x) = x
//   autoencoder  psi(x) = encoder(x), a dimension reduction (out < in)
//   kernel       psi(x) = sum_i alpha_i exp(-|c_i - x|^2 / scale), scalar
class Embedding {
 public:
  static Embedding identity();
  static Embedding autoencoder(MlpNetwork encoder, MlpNetwork decoder);
  static Embedding kernel(Tensor centers, Tensor coefficients, double scale);

  EmbeddingKind kind() const { return kind_; }
  std::size_t out_dim(std::size_t input_dim) const;

  /// Batched: x is {n, d}, result {n, out_dim(d)}.
  Tensor embed(const Tensor& x) const;

  /// Same map as tape operations; embedding parameters enter as constants so
  /// gradients flow only through x.
  Var embed_tape(Tape& tape, Var x) const;

  const MlpNetwork& encoder() const { return encoder_; }
  const MlpNetwork& decoder() const { return decoder_; }
  const Tensor& centers() const { return centers_; }
  const Tensor& coefficients() const { return coefficients_; }
  double kernel_scale() const { return kernel_scale_; }

 private:
  EmbeddingKind kind_ = EmbeddingKind::kIdentity;
  MlpNetwork encoder_;
  MlpNetwork decoder_;
  Tensor centers_;       // {mc, d}
  Tensor coefficients_;  // {mc, 1}
  double kernel_scale_ = 1.0;
};

struct PretrainStats {
  double initial_loss = 0.0;
  double final_loss = 0.0;
};

/// Trains encoder/decoder on mean squared reconstruction error and returns
/// the autoencoder embedding with the best-scoring parameters seen.
/// encoder_widths runs from the data dimension down to the bottleneck; the
/// decoder mirrors it.
Embedding pretrain_autoencoder(const Tensor& data,
                               const std::vector<std::size_t>& encoder_widths,
                               std::size_t iters, const OptimizerConfig& optimizer,
                               Rng& rng, PretrainStats* stats = nullptr);

/// Mean squared reconstruction error of an autoencoder embedding over data.
double reconstruction_error(const Embedding& embedding, const Tensor& data);

struct KernelFitResult {
  Embedding embedding;
  double objective = 0.0;
};

/// Fits kernel-expansion coefficients (centers = the real batch x) by
/// first-order descent on mean(disc_terms) + lambda * regularizer. The
/// returned coefficients never score worse than alpha = 0.
KernelFitResult fit_kernel_embedding(const Tensor& x, const Tensor& y,
                                     const std::vector<double>& disc_terms,
                                     const AffinityGraph& w, double lambda,
                                     double kernel_scale, std::size_t iters,
                                     Rng& rng);

/// Direct evaluation of the kernel-fit objective at given coefficients.
double kernel_fit_objective(const Tensor& x, const Tensor& y,
                            const std::vector<double>& disc_terms,
                            const AffinityGraph& w, double lambda,
                            double kernel_scale, const Tensor& alpha);

}  // namespace mrgan
