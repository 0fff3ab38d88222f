#pragma once

#include <functional>
#include <vector>

#include "mrgan/tensor.hpp"

namespace mrgan {

/// Central-difference gradient of a scalar function at x.
std::vector<double> finite_diff_grad(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x, double h = 1e-4);

/// Same, for a function of a tensor; the result has x's shape.
Tensor finite_diff_grad(const std::function<double(const Tensor&)>& f,
                        const Tensor& x, double h = 1e-4);

/// Largest relative gradient error max_i |g_i - fd_i| / max(1, |fd_i|).
double max_rel_error(const std::vector<double>& grad,
                     const std::vector<double>& fd);

}  // namespace mrgan
