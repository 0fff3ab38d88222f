#include "mrgan/mode_coverage.hpp"

#include <cmath>

#include "mrgan/error.hpp"

namespace mrgan {

ModeReport mode_coverage(const Dataset& gen, const MixtureSpec& spec,
                         double hq_radius_multiplier) {
  require(gen.size() >= 1, "mode coverage needs at least one sample");
  require(hq_radius_multiplier > 0.0, "radius multiplier must be positive");
  const Tensor centers = mode_centers(spec);
  require(gen.dim() == spec.dim(),
          "sample dimension does not match the mixture's ambient dimension");

  const std::size_t n = gen.size();
  const std::size_t d = gen.dim();
  const double radius = hq_radius_multiplier * spec.sigma;
  const double radius_sq = radius * radius;

  ModeReport report;
  report.total_modes = spec.modes;
  std::vector<std::size_t> hits(spec.modes, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    double best_sq = -1.0;
    for (std::size_t k = 0; k < spec.modes; ++k) {
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = gen.samples.at(i, c) - centers.at(k, c);
        s += diff * diff;
      }
      if (best_sq < 0.0 || s < best_sq) {
        best_sq = s;
        best = k;
      }
    }
    if (best_sq <= radius_sq) ++hits[best];
  }

  const double min_hits =
      0.05 * static_cast<double>(n) / static_cast<double>(spec.modes);
  std::size_t within = 0;
  report.occupancy.resize(spec.modes);
  for (std::size_t k = 0; k < spec.modes; ++k) {
    within += hits[k];
    report.occupancy[k] =
        static_cast<double>(hits[k]) / static_cast<double>(n);
    if (static_cast<double>(hits[k]) >= min_hits) ++report.modes_covered;
  }
  report.high_quality_fraction =
      static_cast<double>(within) / static_cast<double>(n);
  return report;
}

}  // namespace mrgan
