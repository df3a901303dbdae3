#include "phasekit/scales.hpp"

#include <cmath>

#include "phasekit/errors.hpp"

namespace phasekit {

ScaleParam::ScaleParam(double a, double hbar) : a_(a), hbar_(hbar) {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("scale a must be positive and finite");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw InvalidArgument("hbar must be positive and finite");
  }
}

ScaleParam ScaleParam::from_momentum_width(double b, double hbar) {
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidArgument("scale b must be positive and finite");
  return ScaleParam(hbar / (2.0 * b), hbar);
}

void PhaseIndex::validate() const {
  if (n < 0) throw InvalidArgument("excitation number n must be non-negative");
  if (!std::isfinite(X) || !std::isfinite(P)) throw InvalidArgument("X and P must be finite");
}

Dispersions dispersions(const PhaseIndex& idx) {
  idx.validate();
  const double k = 2.0 * idx.n + 1.0;
  return {k * idx.scale.coord_unit(), k * idx.scale.momentum_unit()};
}

}  // namespace phasekit
