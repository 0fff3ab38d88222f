#include "mrgan/finite_diff.hpp"

#include <cmath>

#include "mrgan/error.hpp"

namespace mrgan {

std::vector<double> finite_diff_grad(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x, double h) {
  require(h > 0.0, "finite_diff_grad: step must be positive");
  std::vector<double> probe = x;
  std::vector<double> grad(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double fp = f(probe);
    probe[i] = x[i] - h;
    const double fm = f(probe);
    probe[i] = x[i];
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

Tensor finite_diff_grad(const std::function<double(const Tensor&)>& f,
                        const Tensor& x, double h) {
  require(h > 0.0, "finite_diff_grad: step must be positive");
  Tensor probe = x;
  Tensor grad = Tensor::zeros(x.shape);
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe.data[i] = x.data[i] + h;
    const double fp = f(probe);
    probe.data[i] = x.data[i] - h;
    const double fm = f(probe);
    probe.data[i] = x.data[i];
    grad.data[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

double max_rel_error(const std::vector<double>& grad,
                     const std::vector<double>& fd) {
  require(grad.size() == fd.size(), "max_rel_error: length mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const double denom = std::max(1.0, std::fabs(fd[i]));
    worst = std::max(worst, std::fabs(grad[i] - fd[i]) / denom);
  }
  return worst;
}

}  // namespace mrgan
