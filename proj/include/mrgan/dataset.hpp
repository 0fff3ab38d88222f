#pragma once

#include <cstddef>
#include <string>

#include "mrgan/rng.hpp"
#include "mrgan/tensor.hpp"

namespace mrgan {

// Ring of gaussian modes, optionally embedded into a 3D hyperplane through
// two orthonormal basis vectors and an offset.
struct MixtureSpec {
  std::size_t modes = 8;
  double radius = 2.0;
  double sigma = 0.05;
  bool embed_hyperplane = false;
  Tensor basis1;  // {3}
  Tensor basis2;  // {3}
  Tensor offset;  // {3}

  /// Planar 8-mode ring in R^2.
  static MixtureSpec ring8();
  /// Ring embedded in a 3D hyperplane; basis from a seeded orthonormalization,
  /// offset (0, 0, 1).
  static MixtureSpec ring8_hyperplane(std::uint64_t seed);

  std::size_t dim() const { return embed_hyperplane ? 3 : 2; }
};

struct Dataset {
  Tensor samples;  // {n, d}
  std::string provenance;

  std::size_t size() const { return samples.rank() == 2 ? samples.shape[0] : 0; }
  std::size_t dim() const { return samples.rank() == 2 ? samples.shape[1] : 0; }
};

/// Mode centers of the mixture, one per row ({modes, dim}).
Tensor mode_centers(const MixtureSpec& spec);

Dataset sample_mixture(const MixtureSpec& spec, std::size_t n, Rng& rng);

/// Big-endian IDX image container (magic 0x00000803); bytes rescaled to
/// [-1, 1] and images flattened to rows*cols coordinates.
Dataset load_idx(const std::string& path);

Dataset load_csv(const std::string& path, std::size_t d, bool header = false);

void save_csv(const Dataset& dataset, const std::string& path);

}  // namespace mrgan
