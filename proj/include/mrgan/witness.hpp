#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "mrgan/tensor.hpp"

namespace mrgan {

/// An edge (dim 1) or triangle (dim 2) over landmark vertex ids, with the
/// filtration time at which it appears. Vertex ids are ascending; for edges
/// v[2] is unused and set to 0.
struct Simplex {
  int dim = 1;
  std::array<std::size_t, 3> v = {0, 0, 0};
  double time = 0.0;
};

// Filtered simplicial complex built from landmarks over a witness cloud.
// All landmark vertices are present from time 0; `simplices` holds the
// edges and triangles sorted by (time, dim, vertex ids).
struct WitnessComplex {
  std::size_t vertex_count = 0;
  std::vector<Simplex> simplices;
  double alpha_max = 0.0;
};

// Builds the filtered witness complex up to dimension 2. A simplex sigma
// appears at the smallest time alpha such that some witness point w has
// every vertex of sigma within alpha + d_k(w), where d_k(w) is the distance
// from w to its k-th nearest landmark and k = |sigma|. Appearance times are
// snapped up to the grid {alpha_max * s / steps} and clamped so that no
// triangle appears before all three of its edges; a triangle whose edge
// never appears by alpha_max is dropped. All points act as witnesses.
// Landmarks that all share one position give a single-vertex complex.
WitnessComplex witness_filtration(const Tensor& points,
                                  const std::vector<std::size_t>& landmarks,
                                  double alpha_max, std::size_t steps);

}  // namespace mrgan
