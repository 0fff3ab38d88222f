#pragma once

#include <cstddef>
#include <vector>

#include "mrgan/rng.hpp"
#include "mrgan/tensor.hpp"

namespace mrgan {

// Max-min landmark selection over a point cloud {n, d}. The first landmark
// index is drawn uniformly from rng; every following landmark is the point
// that maximizes the minimum distance to the landmarks chosen so far, with
// exact ties broken toward the lowest index. Returns L point indices.
std::vector<std::size_t> select_landmarks_maxmin(const Tensor& points,
                                                 std::size_t L, Rng& rng);

/// Same greedy selection with the first landmark fixed to `first`.
std::vector<std::size_t> select_landmarks_maxmin_from(const Tensor& points,
                                                      std::size_t L,
                                                      std::size_t first);

}  // namespace mrgan
