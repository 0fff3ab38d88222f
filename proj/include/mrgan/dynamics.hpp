#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "mrgan/objective.hpp"
#include "mrgan/tensor.hpp"
#include "mrgan/train.hpp"

namespace mrgan {

// Joint parameter point for the continuous-time view of training: generator
// parameters first, then discriminator parameters.
struct DynamicsState {
  std::vector<double> theta;
  std::size_t gen_count = 0;
};

DynamicsState pack_state(const MlpNetwork& gen, const MlpNetwork& disc);

/// Parameter count of an MLP with the given layer widths.
std::size_t mlp_param_count(const std::vector<std::size_t>& widths);

using VectorField = std::function<std::vector<double>(const std::vector<double>&)>;

// Gradient flow of the empirical objective on a frozen batch: the generator
// block descends (du/dt = -dF/du) and the discriminator block ascends
// (dv/dt = +dF/dv). batch.y is recomputed from batch.h at every evaluation,
// so the field follows the generator as it moves; batch.x and the affinity
// graph built from it stay fixed. Network shapes come from config.
std::vector<double> gradient_field(const DynamicsState& state,
                                   const Batch& batch,
                                   const TrainConfig& config);

/// The same field as a reusable closure over (batch, config).
VectorField make_gradient_field(const Batch& batch, const TrainConfig& config);

/// Central-difference Jacobian of a vector field at theta. Fails on
/// non-finite field values.
Tensor jacobian_at(const VectorField& field, const std::vector<double>& theta,
                   double fd_step = 1e-4);

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<double> norms;         // |theta(t)|
  std::vector<double> ref_distance;  // |theta(t) - reference|, when given
  bool divergent = false;
};

// Fixed-step fourth-order Runge-Kutta integration. The trajectory is
// truncated and flagged divergent when the state norm crosses the ceiling or
// the field stops being finite.
Trajectory integrate_dynamics(const VectorField& field,
                              std::vector<double> theta0, double dt,
                              std::size_t steps, double ceiling = 1e6,
                              const std::vector<double>* reference = nullptr);

enum class PointMassRegularizer { kQuadratic, kPairwise };

// Closed-form two-parameter game (the Dirac-GAN fixture): a point-mass
// generator at theta against a linear discriminator with slope v, with the
// real distribution a point mass at the origin. The game value is
// F(theta, v) = theta v + lambda r(theta), giving the flow
//   theta' = -v - lambda r'(theta),   v' = theta.
// Unregularized this is a pure rotation with spectrum {+-i}: training
// circles the equilibrium forever. r is either the direct displacement
// penalty theta^2 (quadratic), or the batch pair regularizer evaluated on
// the point masses (pairwise), which cancels identically because every
// sample pair has the same displacement, so it contributes nothing here.
struct DiracGan {
  double lambda = 0.0;
  PointMassRegularizer reg = PointMassRegularizer::kQuadratic;

  std::array<double, 2> field_at(const std::array<double, 2>& tv) const;

  /// Analytic Jacobian (the field is linear, so it is state-independent):
  /// [[-2 lambda, -1], [1, 0]] quadratic, [[0, -1], [1, 0]] pairwise.
  Tensor jacobian() const;

  VectorField as_field() const;
};

}  // namespace mrgan
