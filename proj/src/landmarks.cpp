#include "mrgan/landmarks.hpp"

#include <limits>

#include "mrgan/error.hpp"

namespace mrgan {

namespace {

double sq_dist(const Tensor& p, std::size_t i, std::size_t j) {
  const std::size_t d = p.cols();
  double s = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    const double diff = p.at(i, c) - p.at(j, c);
    s += diff * diff;
  }
  return s;
}

}  // namespace

std::vector<std::size_t> select_landmarks_maxmin_from(const Tensor& points,
                                                      std::size_t L,
                                                      std::size_t first) {
  require(points.rank() == 2, "landmark selection expects a {n, d} matrix");
  const std::size_t n = points.rows();
  require(L >= 2, "landmark selection needs L >= 2");
  require(L <= n, "cannot select more landmarks than points");
  require(first < n, "first landmark index out of range");

  std::vector<std::size_t> chosen;
  chosen.reserve(L);
  chosen.push_back(first);

  // min squared distance from every point to the chosen set, kept incremental
  std::vector<double> min_sq(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) min_sq[i] = sq_dist(points, i, first);

  while (chosen.size() < L) {
    std::size_t best = 0;
    double best_sq = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (min_sq[i] > best_sq) {
        best_sq = min_sq[i];
        best = i;
      }
    }
    chosen.push_back(best);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = sq_dist(points, i, best);
      if (s < min_sq[i]) min_sq[i] = s;
    }
  }
  return chosen;
}

std::vector<std::size_t> select_landmarks_maxmin(const Tensor& points,
                                                 std::size_t L, Rng& rng) {
  require(points.rank() == 2, "landmark selection expects a {n, d} matrix");
  require(points.rows() >= 1, "landmark selection needs at least one point");
  const std::size_t first = rng.uniform_index(points.rows());
  return select_landmarks_maxmin_from(points, L, first);
}

}  // namespace mrgan
