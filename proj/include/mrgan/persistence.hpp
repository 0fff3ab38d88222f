#pragma once

#include <vector>

#include "mrgan/witness.hpp"

namespace mrgan {

/// Half-open lifetime [birth, death) of a one-dimensional hole. Classes
/// still alive at the end of the filtration carry death == alpha_max.
struct PersistenceInterval {
  double birth = 0.0;
  double death = 0.0;
};

struct PersistenceIntervals {
  std::vector<PersistenceInterval> intervals;  // sorted by (birth, death)
  double alpha_max = 0.0;
};

// H1 persistence of a filtered complex by boundary-matrix column reduction
// over Z/2. Simplices are processed in filtration order (time, then
// dimension, then vertex ids); an edge whose reduced boundary column is
// empty births a cycle, and the triangle whose reduced column pivots on
// that edge kills it.
PersistenceIntervals persistence_h1(const WitnessComplex& complex);

}  // namespace mrgan
