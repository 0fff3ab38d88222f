#include "mrgan/measuring.hpp"

#include <cmath>
#include <string>

#include "mrgan/error.hpp"

namespace mrgan {

MeasuringFunction MeasuringFunction::log_delta(double delta) {
  require(delta > 0.0 && delta < 1.0,
          "log_delta: delta must lie in (0,1), got " + std::to_string(delta));
  return MeasuringFunction(MeasuringKind::kLogDelta, delta);
}

MeasuringFunction MeasuringFunction::identity() {
  return MeasuringFunction(MeasuringKind::kIdentity, 0.0);
}

double MeasuringFunction::apply(double t) const {
  require(t >= 0.0 && t <= 1.0,
          "measuring function argument outside [0,1]: " + std::to_string(t));
  if (kind_ == MeasuringKind::kIdentity) return t;
  return std::log(delta_ + (1.0 - delta_) * t);
}

double MeasuringFunction::derivative(double t) const {
  require(t >= 0.0 && t <= 1.0,
          "measuring function argument outside [0,1]: " + std::to_string(t));
  if (kind_ == MeasuringKind::kIdentity) return 1.0;
  return (1.0 - delta_) / (delta_ + (1.0 - delta_) * t);
}

double MeasuringFunction::range_lo() const {
  return kind_ == MeasuringKind::kIdentity ? 0.0 : std::log(delta_);
}

double MeasuringFunction::range_hi() const {
  return kind_ == MeasuringKind::kIdentity ? 1.0 : 0.0;
}

double MeasuringFunction::lipschitz() const {
  return kind_ == MeasuringKind::kIdentity ? 1.0 : 1.0 / delta_;
}

double MeasuringFunction::range_width() const {
  return kind_ == MeasuringKind::kIdentity ? 1.0 : -std::log(delta_);
}

double MeasuringFunction::derivative_sup() const {
  return kind_ == MeasuringKind::kIdentity ? 1.0 : (1.0 - delta_) / delta_;
}

Var MeasuringFunction::apply_tape(Tape& tape, Var t) const {
  if (kind_ == MeasuringKind::kIdentity) return t;
  return tape.log(tape.add_scalar(tape.mul_scalar(t, 1.0 - delta_), delta_));
}

}  // namespace mrgan
