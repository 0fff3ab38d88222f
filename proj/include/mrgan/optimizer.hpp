#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mrgan {

enum class OptimizerKind { kSgd, kAdam, kRmsProp };

const char* optimizer_name(OptimizerKind k);
OptimizerKind optimizer_from_name(const std::string& name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double lr = 1e-3;
  // adam
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_adam = 1e-8;
  // rmsprop
  double decay = 0.9;
  double eps_rms = 1e-8;

  static OptimizerConfig sgd(double lr);
  static OptimizerConfig adam(double lr);
  static OptimizerConfig rmsprop(double lr);
};

// First-order update rule with per-parameter state. Buffers are sized on the
// first step and the parameter length is fixed from then on.
class Optimizer {
 public:
  explicit Optimizer(const OptimizerConfig& config);

  /// Applies one descent step in place.
  void step(std::vector<double>& params, const std::vector<double>& grad);

  const OptimizerConfig& config() const { return config_; }
  std::size_t step_count() const { return step_count_; }
  const std::vector<double>& first_moment() const { return m_; }
  const std::vector<double>& second_moment() const { return v_; }

 private:
  OptimizerConfig config_;
  std::size_t step_count_ = 0;
  std::vector<double> m_;  // adam first moment
  std::vector<double> v_;  // adam second moment / rmsprop running mean square
};

}  // namespace mrgan
