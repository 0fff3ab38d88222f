#include "mrgan/dynamics.hpp"

#include <cmath>

#include "mrgan/affinity.hpp"
#include "mrgan/error.hpp"

namespace mrgan {
namespace {

double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double l2_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// Networks shaped per config with parameters taken from a flat state vector.
struct UnpackedNets {
  MlpNetwork gen;
  MlpNetwork disc;
};

UnpackedNets unpack_state(const std::vector<double>& theta,
                          std::size_t gen_count, const TrainConfig& config) {
  Rng scratch(0);
  UnpackedNets nets;
  nets.gen = MlpNetwork::create(config.gen_widths, config.gen_hidden,
                                Activation::kIdentity, scratch);
  nets.disc = MlpNetwork::create(config.disc_widths, config.disc_hidden,
                                 Activation::kSigmoid, scratch);
  require(gen_count == nets.gen.param_count(),
          "gradient_field: generator block size does not match config widths");
  require(theta.size() == gen_count + nets.disc.param_count(),
          "gradient_field: state size does not match config widths");
  nets.gen.set_flat_params(
      std::vector<double>(theta.begin(), theta.begin() + static_cast<long>(gen_count)));
  nets.disc.set_flat_params(
      std::vector<double>(theta.begin() + static_cast<long>(gen_count), theta.end()));
  return nets;
}

}  // namespace

DynamicsState pack_state(const MlpNetwork& gen, const MlpNetwork& disc) {
  DynamicsState s;
  s.theta = gen.flat_params();
  s.gen_count = s.theta.size();
  const std::vector<double> d = disc.flat_params();
  s.theta.insert(s.theta.end(), d.begin(), d.end());
  return s;
}

std::size_t mlp_param_count(const std::vector<std::size_t>& widths) {
  require(widths.size() >= 2, "mlp_param_count: need at least two layer widths");
  std::size_t c = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l)
    c += widths[l] * widths[l + 1] + widths[l + 1];
  return c;
}

std::vector<double> gradient_field(const DynamicsState& state,
                                   const Batch& batch,
                                   const TrainConfig& config) {
  require(batch.x.rank() == 2 && batch.x.shape[0] >= 1,
          "gradient_field: batch.x must hold at least one sample");
  require(batch.h.rank() == 2 && batch.h.shape[0] == batch.x.shape[0],
          "gradient_field: batch.h must pair with batch.x row by row");

  UnpackedNets nets = unpack_state(state.theta, state.gen_count, config);

  Batch live;
  live.x = batch.x;
  live.h = batch.h;
  live.y = generator_forward(nets.gen, batch.h);
  const AffinityGraph w = affinity_weights(live.x, config.affinity);

  // Generator half: d(gen loss)/du equals dF/du since the real-sample term
  // has no generator dependence.
  Tape gen_tape;
  GeneratorLossGraph gg =
      generator_loss_graph(gen_tape, nets.gen, nets.disc, live, config.phi,
                           config.psi, w, config.lambda);
  gen_tape.backward(gg.loss);
  const std::vector<double> gen_grad =
      nets.gen.read_flat_grads(gen_tape, gg.gen_params);

  // Discriminator half: the stored loss is the negated payoff, so its
  // negated gradient ascends F.
  Tape disc_tape;
  DiscriminatorLossGraph dg =
      discriminator_loss_graph(disc_tape, nets.disc, live, config.phi);
  disc_tape.backward(dg.loss);
  const std::vector<double> disc_grad =
      nets.disc.read_flat_grads(disc_tape, dg.disc_params);

  std::vector<double> field(state.theta.size(), 0.0);
  for (std::size_t i = 0; i < gen_grad.size(); ++i) field[i] = -gen_grad[i];
  for (std::size_t j = 0; j < disc_grad.size(); ++j)
    field[state.gen_count + j] = -disc_grad[j];
  require(all_finite(field), "gradient_field: non-finite gradient");
  return field;
}

VectorField make_gradient_field(const Batch& batch, const TrainConfig& config) {
  const std::size_t gen_count = mlp_param_count(config.gen_widths);
  return [batch, config, gen_count](const std::vector<double>& theta) {
    DynamicsState s;
    s.theta = theta;
    s.gen_count = gen_count;
    return gradient_field(s, batch, config);
  };
}

Tensor jacobian_at(const VectorField& field, const std::vector<double>& theta,
                   double fd_step) {
  require(fd_step > 0.0, "jacobian_at: fd_step must be positive");
  const std::size_t n = theta.size();
  require(n >= 1, "jacobian_at: empty state");

  Tensor j({n, n});
  std::vector<double> plus = theta;
  std::vector<double> minus = theta;
  for (std::size_t col = 0; col < n; ++col) {
    plus[col] = theta[col] + fd_step;
    minus[col] = theta[col] - fd_step;
    const std::vector<double> fp = field(plus);
    const std::vector<double> fm = field(minus);
    require(fp.size() == n && fm.size() == n,
            "jacobian_at: field dimension does not match state dimension");
    for (std::size_t row = 0; row < n; ++row)
      j.at(row, col) = (fp[row] - fm[row]) / (2.0 * fd_step);
    plus[col] = theta[col];
    minus[col] = theta[col];
  }
  require(j.all_finite(), "jacobian_at: non-finite finite-difference entries");
  return j;
}

Trajectory integrate_dynamics(const VectorField& field,
                              std::vector<double> theta0, double dt,
                              std::size_t steps, double ceiling,
                              const std::vector<double>* reference) {
  require(dt > 0.0, "integrate_dynamics: dt must be positive");
  require(steps >= 1, "integrate_dynamics: steps must be >= 1");
  require(ceiling > 0.0, "integrate_dynamics: ceiling must be positive");
  if (reference != nullptr)
    require(reference->size() == theta0.size(),
            "integrate_dynamics: reference dimension mismatch");

  const std::size_t n = theta0.size();
  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.norms.reserve(steps + 1);

  auto record = [&](double t, const std::vector<double>& x) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.norms.push_back(l2_norm(x));
    if (reference != nullptr) traj.ref_distance.push_back(l2_dist(x, *reference));
  };
  record(0.0, theta0);

  std::vector<double> x = std::move(theta0);
  std::vector<double> stage(n);
  for (std::size_t s = 1; s <= steps; ++s) {
    const std::vector<double> k1 = field(x);
    for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + 0.5 * dt * k1[i];
    const std::vector<double> k2 = field(stage);
    for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + 0.5 * dt * k2[i];
    const std::vector<double> k3 = field(stage);
    for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + dt * k3[i];
    const std::vector<double> k4 = field(stage);
    for (std::size_t i = 0; i < n; ++i)
      x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    if (!all_finite(x)) {
      traj.divergent = true;
      break;
    }
    record(dt * static_cast<double>(s), x);
    if (l2_norm(x) > ceiling) {
      traj.divergent = true;
      break;
    }
  }
  return traj;
}

std::array<double, 2> DiracGan::field_at(const std::array<double, 2>& tv) const {
  const double theta = tv[0];
  const double v = tv[1];
  double reg_slope = 0.0;
  if (reg == PointMassRegularizer::kQuadratic) reg_slope = 2.0 * theta;
  return {-v - lambda * reg_slope, theta};
}

Tensor DiracGan::jacobian() const {
  Tensor j({2, 2});
  j.at(0, 0) = reg == PointMassRegularizer::kQuadratic ? -2.0 * lambda : 0.0;
  j.at(0, 1) = -1.0;
  j.at(1, 0) = 1.0;
  j.at(1, 1) = 0.0;
  return j;
}

VectorField DiracGan::as_field() const {
  const DiracGan copy = *this;
  return [copy](const std::vector<double>& tv) {
    require(tv.size() == 2, "DiracGan: state must be (theta, v)");
    const std::array<double, 2> f = copy.field_at({tv[0], tv[1]});
    return std::vector<double>{f[0], f[1]};
  };
}

}  // namespace mrgan
