#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mrgan/dataset.hpp"
#include "mrgan/persistence.hpp"

namespace mrgan {

/// values[i] = fraction of the filtration during which exactly i holes are
/// alive; holes beyond values.size() - 1 count into the last bin. Sums to 1.
struct MrltProfile {
  std::vector<double> values;
};

/// Relative living time profile of an interval set, i_max bins.
MrltProfile mrlt(const PersistenceIntervals& intervals, std::size_t i_max);

struct GsParams {
  std::size_t landmarks = 64;
  double gamma = 1.0 / 128.0;  // alpha_max = gamma * max landmark distance
  std::size_t i_max = 100;
  std::size_t repeats = 100;
  std::size_t steps = 100;  // filtration grid resolution
  std::uint64_t seed = 1;
};

struct GsReport {
  double gs = 0.0;
  GsParams params;
  MrltProfile mrlt_real;
  MrltProfile mrlt_gen;
};

/// Mean MRLT profile of one cloud over `repeats` seeded landmark draws.
/// Repeat r always uses the stream split(r + 1) of the base seed, so two
/// clouds scored together see identical draw schedules.
MrltProfile dataset_mrlt_mean(const Dataset& data, const GsParams& params);

// Squared difference between the repeat-averaged hole-lifetime profiles of
// the two clouds: sum_i (mrlt_real[i] - mrlt_gen[i])^2. Zero means the
// clouds expose the same one-dimensional topology; lower is better. The
// formula is exactly symmetric in its arguments.
double geometry_score(const Dataset& real, const Dataset& gen,
                      const GsParams& params);

/// geometry_score plus both profiles, for reporting.
GsReport geometry_score_report(const Dataset& real, const Dataset& gen,
                               const GsParams& params);

/// JSON text {gs, repeats, landmarks, gamma, i_max, mrlt_real, mrlt_gen}.
std::string gs_report_json(const GsReport& report);

}  // namespace mrgan
