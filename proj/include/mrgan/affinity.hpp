#pragma once

#include <cstddef>

#include "mrgan/tensor.hpp"

namespace mrgan {

enum class NeighborRule { kFull, kKnn };

struct AffinityOptions {
  double rho = 128.0;
  NeighborRule rule = NeighborRule::kFull;
  std::size_t k = 8;
};

// Symmetric nonnegative pairwise weights over one batch of samples.
// w_ij = exp(-|x_i - x_j|^2 / rho) when i and j are neighbors, else 0.
// The full rule makes every pair neighbors (so w_ii = 1); the knn rule keeps
// an edge when either endpoint is among the other's k nearest and zeroes the
// diagonal.
struct AffinityGraph {
  Tensor weights;  // {m, m}
  double rho = 0.0;
  NeighborRule rule = NeighborRule::kFull;
  std::size_t k = 0;

  std::size_t size() const { return weights.rank() == 2 ? weights.shape[0] : 0; }
  /// deg_i = sum_j w_ij
  std::vector<double> degrees() const;
};

AffinityGraph affinity_weights(const Tensor& x, const AffinityOptions& options);

/// Squared euclidean distance between rows i and j of x.
double squared_distance(const Tensor& x, std::size_t i, std::size_t j);

}  // namespace mrgan
