#pragma once

#include <complex>
#include <vector>

#include "mrgan/tensor.hpp"

namespace mrgan {

struct EigenResult {
  std::vector<std::complex<double>> eigenvalues;  // sorted by (re, im)
  bool converged = true;
};

// Eigenvalues of a real square matrix: balancing, Householder reduction to
// upper Hessenberg form, then implicit double-shift QR with deflation.
// A block that fails to deflate within the per-eigenvalue iteration cap
// marks the result as not converged instead of returning garbage.
EigenResult eigenvalues_dense(const Tensor& a);

struct HurwitzReport {
  bool is_hurwitz = false;  // all real parts below -tolerance
  bool converged = true;
  std::vector<std::complex<double>> spectrum;
};

/// Spectrum plus the strict stability verdict Re(lambda) < -tolerance.
HurwitzReport hurwitz_check(const Tensor& jacobian, double tolerance = 1e-9);

}  // namespace mrgan
