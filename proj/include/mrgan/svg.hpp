#pragma once

#include <cstddef>
#include <string>

#include "mrgan/tensor.hpp"

namespace mrgan {

struct ScatterOptions {
  std::size_t width = 640;
  std::size_t height = 640;
  /// Per-cloud cap; larger clouds are thinned with an even stride.
  std::size_t max_points = 2000;
  std::string real_color = "#4477aa";
  std::string generated_color = "#cc6644";
};

/// Plot basis {d, 2}. Identity for d == 2; for higher dimensions the top two
/// principal directions of the real cloud (power iteration with deflation on
/// the covariance of at most max_rows evenly strided rows). Both clouds are
/// then drawn in the same basis so their overlap is meaningful.
Tensor scatter_projection(const Tensor& real, std::size_t max_rows = 2000);

/// Standalone SVG 1.1 document: frame, zero axes when visible, the two point
/// clouds, and a legend. Real points are drawn first so generated points
/// stay visible on top.
std::string scatter_svg(const Tensor& real, const Tensor& generated,
                        const ScatterOptions& options = {});

void write_scatter_svg(const Tensor& real, const Tensor& generated,
                       const std::string& path, const ScatterOptions& options = {});

}  // namespace mrgan
