#pragma once

namespace phasekit {

/// Coordinate half-width `a` and reduced Planck constant. The momentum
/// half-width b = hbar / (2a) is always derived, so a*b = hbar/2 holds to one
/// rounding.
class ScaleParam {
 public:
  ScaleParam() = default;
  explicit ScaleParam(double a, double hbar = 1.0);

  static ScaleParam from_momentum_width(double b, double hbar = 1.0);

  double a() const { return a_; }
  double b() const { return hbar_ / (2.0 * a_); }
  double hbar() const { return hbar_; }

  /// A = a^2, the coordinate variance unit.
  double coord_unit() const { return a_ * a_; }
  /// B = b^2, the momentum variance unit.
  double momentum_unit() const {
    const double bb = b();
    return bb * bb;
  }

  friend bool operator==(const ScaleParam&, const ScaleParam&) = default;

 private:
  double a_ = 1.0;
  double hbar_ = 1.0;
};

/// Label (n, X, P, scale) of a phase-space basis state.
struct PhaseIndex {
  int n = 0;
  double X = 0.0;
  double P = 0.0;
  ScaleParam scale;

  /// Throws InvalidArgument when n < 0 or X, P are not finite.
  void validate() const;

  friend bool operator==(const PhaseIndex&, const PhaseIndex&) = default;
};

struct Dispersions {
  double variance_x = 0.0;
  double variance_p = 0.0;
};

/// ((2n+1) a^2, (2n+1) b^2).
Dispersions dispersions(const PhaseIndex& idx);

}  // namespace phasekit
