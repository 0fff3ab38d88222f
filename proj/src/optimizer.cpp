#include "mrgan/optimizer.hpp"

#include <cmath>

#include "mrgan/error.hpp"

namespace mrgan {

const char* optimizer_name(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::kSgd: return "sgd";
    case OptimizerKind::kAdam: return "adam";
    case OptimizerKind::kRmsProp: return "rmsprop";
  }
  return "unknown";
}

OptimizerKind optimizer_from_name(const std::string& name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "rmsprop") return OptimizerKind::kRmsProp;
  fail("unknown optimizer '" + name + "'");
}

OptimizerConfig OptimizerConfig::sgd(double lr) {
  OptimizerConfig c;
  c.kind = OptimizerKind::kSgd;
  c.lr = lr;
  return c;
}

OptimizerConfig OptimizerConfig::adam(double lr) {
  OptimizerConfig c;
  c.kind = OptimizerKind::kAdam;
  c.lr = lr;
  return c;
}

OptimizerConfig OptimizerConfig::rmsprop(double lr) {
  OptimizerConfig c;
  c.kind = OptimizerKind::kRmsProp;
  c.lr = lr;
  return c;
}

Optimizer::Optimizer(const OptimizerConfig& config) : config_(config) {
  require(config.lr > 0.0, "optimizer: learning rate must be positive");
}

void Optimizer::step(std::vector<double>& params, const std::vector<double>& grad) {
  require(params.size() == grad.size(),
          "optimizer step: parameter and gradient sizes differ");
  if (config_.kind != OptimizerKind::kSgd) {
    if (m_.empty() && config_.kind == OptimizerKind::kAdam)
      m_.assign(params.size(), 0.0);
    if (v_.empty()) v_.assign(params.size(), 0.0);
    require(v_.size() == params.size(),
            "optimizer step: parameter length changed between steps");
  }
  ++step_count_;

  switch (config_.kind) {
    case OptimizerKind::kSgd: {
      for (std::size_t i = 0; i < params.size(); ++i)
        params[i] -= config_.lr * grad[i];
      return;
    }
    case OptimizerKind::kAdam: {
      const double b1 = config_.beta1, b2 = config_.beta2;
      const double t = static_cast<double>(step_count_);
      const double c1 = 1.0 - std::pow(b1, t);
      const double c2 = 1.0 - std::pow(b2, t);
      for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = b1 * m_[i] + (1.0 - b1) * grad[i];
        v_[i] = b2 * v_[i] + (1.0 - b2) * grad[i] * grad[i];
        const double mhat = m_[i] / c1;
        const double vhat = v_[i] / c2;
        params[i] -= config_.lr * mhat / (std::sqrt(vhat) + config_.eps_adam);
      }
      return;
    }
    case OptimizerKind::kRmsProp: {
      for (std::size_t i = 0; i < params.size(); ++i) {
        v_[i] = config_.decay * v_[i] + (1.0 - config_.decay) * grad[i] * grad[i];
        params[i] -= config_.lr * grad[i] / std::sqrt(v_[i] + config_.eps_rms);
      }
      return;
    }
  }
}

}  // namespace mrgan
