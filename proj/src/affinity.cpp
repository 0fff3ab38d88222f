#include "mrgan/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mrgan/error.hpp"

namespace mrgan {

double squared_distance(const Tensor& x, std::size_t i, std::size_t j) {
  const std::size_t d = x.shape[1];
  const double* a = &x.data[i * d];
  const double* b = &x.data[j * d];
  double acc = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    const double diff = a[c] - b[c];
    acc += diff * diff;
  }
  return acc;
}

std::vector<double> AffinityGraph::degrees() const {
  const std::size_t m = size();
  std::vector<double> deg(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) deg[i] += weights.at(i, j);
  return deg;
}

AffinityGraph affinity_weights(const Tensor& x, const AffinityOptions& options) {
  require(x.rank() == 2, "affinity_weights: samples must form a rank-2 tensor");
  const std::size_t m = x.shape[0];
  require(m >= 2, "affinity_weights: need at least 2 samples, got " +
                      std::to_string(m));
  require(options.rho > 0.0, "affinity_weights: kernel scale must be positive, got " +
                                 std::to_string(options.rho));

  AffinityGraph graph;
  graph.rho = options.rho;
  graph.rule = options.rule;
  graph.k = options.k;
  graph.weights = Tensor::zeros({m, m});

  std::vector<std::vector<bool>> neighbor;
  if (options.rule == NeighborRule::kKnn) {
    require(options.k >= 1, "affinity_weights: knn rule needs k >= 1");
    neighbor.assign(m, std::vector<bool>(m, false));
    const std::size_t k = std::min(options.k, m - 1);
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t i = 0; i < m; ++i) {
      order.clear();
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        order.emplace_back(squared_distance(x, i, j), j);
      }
      std::sort(order.begin(), order.end());
      for (std::size_t r = 0; r < k; ++r) {
        const std::size_t j = order[r].second;
        neighbor[i][j] = true;  // OR-symmetrized below
        neighbor[j][i] = true;
      }
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      double w = 0.0;
      if (options.rule == NeighborRule::kFull) {
        w = std::exp(-squared_distance(x, i, j) / options.rho);
      } else if (i != j && neighbor[i][j]) {
        w = std::exp(-squared_distance(x, i, j) / options.rho);
      }
      graph.weights.at(i, j) = w;
      graph.weights.at(j, i) = w;
    }
  }
  return graph;
}

}  // namespace mrgan
