#pragma once

#include <cstddef>
#include <vector>

#include "mrgan/dataset.hpp"

namespace mrgan {

struct ModeReport {
  std::size_t modes_covered = 0;
  std::size_t total_modes = 0;
  double high_quality_fraction = 0.0;  // samples near some mode center
  std::vector<double> occupancy;       // per-mode share of all samples
};

// Assigns every sample to its nearest mixture center when the distance is
// at most hq_radius_multiplier * sigma. A mode counts as covered once it
// holds at least 5% of the per-mode fair share n / modes. Occupancies are
// shares of n and sum to at most 1; the remainder is off-manifold mass.
ModeReport mode_coverage(const Dataset& gen, const MixtureSpec& spec,
                         double hq_radius_multiplier = 3.0);

}  // namespace mrgan
