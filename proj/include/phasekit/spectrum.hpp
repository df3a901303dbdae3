#pragma once

#include <complex>
#include <vector>

#include "phasekit/scales.hpp"

namespace phasekit {

/// Amplitudes Psi^0..Psi^N of one state at a fixed phase-space point (X, P, scale).
struct Spectrum {
  double X = 0.0;
  double P = 0.0;
  ScaleParam scale;
  std::vector<std::complex<double>> amplitudes;
  /// 1 - sum |Psi^n|^2 for a normalized state.
  double tail_bound = 0.0;

  int max_order() const { return static_cast<int>(amplitudes.size()) - 1; }
  PhaseIndex index(int n) const { return {n, X, P, scale}; }
};

}  // namespace phasekit
