#pragma once

#include "mrgan/tape.hpp"

namespace mrgan {

enum class MeasuringKind { kLogDelta, kIdentity };

// Concave measuring function applied to discriminator outputs. Two variants:
// log_delta  phi(t) = log(delta + (1-delta) t), mapping [0,1] -> [log delta, 0]
// identity   phi(t) = t, mapping [0,1] -> [0,1]
class MeasuringFunction {
 public:
  static MeasuringFunction log_delta(double delta = 0.1);
  static MeasuringFunction identity();

  MeasuringKind kind() const { return kind_; }
  double delta() const { return delta_; }

  /// phi(t); t must lie in [0,1].
  double apply(double t) const;
  double derivative(double t) const;

  double range_lo() const;
  double range_hi() const;

  /// Lipschitz constant of phi on [0,1]: 1/delta or 1.
  double lipschitz() const;
  /// Diameter of the range: |log delta| or 1.
  double range_width() const;
  /// sup |phi'| on [0,1]: (1-delta)/delta or 1.
  double derivative_sup() const;

  /// phi applied elementwise as tape operations.
  Var apply_tape(Tape& tape, Var t) const;

 private:
  MeasuringFunction(MeasuringKind kind, double delta)
      : kind_(kind), delta_(delta) {}
  MeasuringKind kind_;
  double delta_;
};

}  // namespace mrgan
