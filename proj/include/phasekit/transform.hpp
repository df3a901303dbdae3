#pragma once

#include <complex>

#include "phasekit/basis.hpp"
#include "phasekit/kernel.hpp"
#include "phasekit/scales.hpp"
#include "phasekit/spectrum.hpp"

// Phase-space wavefunctions Psi^n(X, P, b) = <n, X, P, b|psi> and the
// expansions that rebuild psi from them.
namespace phasekit::transform {

using Complex = std::complex<double>;

enum class Route {
  /// Closed-form kernel for analytic states below the cap, quadrature otherwise.
  automatic,
  closed_form,
  quadrature,
};

struct ProjectOptions {
  Route route = Route::automatic;
  int cap = kernel::kDefaultClosedFormCap;
  /// Gauss-Hermite order; 0 selects max(64, n + n' + 24).
  int gh_order = 0;
  /// Adaptive tolerances for sampled-grid states.
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
};

/// Psi^n(X, P, b) = integral phi_n^*(x; idx) psi(x) dx.
Complex project(const StateSpec& s, const PhaseIndex& idx, const ProjectOptions& opts = {});

/// Psi^0..Psi^N at (X, P, scale), computed in parallel over n.
Spectrum project_spectrum(const StateSpec& s, double X, double P, const ScaleParam& scale, int N,
                          const ProjectOptions& opts = {}, int workers = 0);

/// sum_{n <= N} |Psi^n|^2.
double norm_sum(const Spectrum& sp);

struct PhaseSpaceOptions {
  /// Gauss-Hermite order per direction; 0 selects max(64, 2n + 48).
  int order = 0;
  ProjectOptions project;
};

/// integral |Psi^n(X, P, b)|^2 dX dP / (2 pi hbar) at fixed n and b.
double norm_integral(const StateSpec& s, int n, const ScaleParam& scale,
                     const PhaseSpaceOptions& opts = {});

/// Partial sum of Psi^n phi_n(x). Throws TailTooHeavy when the spectrum's
/// tail bound is not below `tail_tol`.
Complex reconstruct_sum(const Spectrum& sp, double x, double tail_tol = 1e-6);

/// Momentum counterpart: partial sum of Psi^n phi~_n(p).
Complex reconstruct_sum_momentum(const Spectrum& sp, double p, double tail_tol = 1e-6);

/// integral Psi^n(X, P, b) phi_n(x; X, P, b) dX dP / (2 pi hbar) at fixed n, b.
Complex reconstruct_integral_XP(const StateSpec& s, int n, const ScaleParam& scale, double x,
                                const PhaseSpaceOptions& opts = {});

/// Result of a reconstruction over a scale variable, with the change caused
/// by doubling the scale window.
struct ScaleReconstruction {
  Complex value;
  double window_sensitivity = 0.0;
  double tolerance = 0.0;
};

struct ScaleIntegralOptions {
  /// The scale integral runs over [ref / window, ref * window] in log space.
  double window = 1000.0;
  /// Reference scale; 0 picks the state's own spread (momentum spread for the
  /// b-integral, position spread for the a-integral).
  double reference = 0.0;
  int panels = 64;
  int nodes_per_panel = 8;
  /// Gauss-Hermite order of the inner integral; 0 selects max(96, 2n + 64).
  int inner_order = 0;
  /// Reported tolerance; WindowSensitive is thrown when doubling the window
  /// moves the value by more than 10x this.
  double tolerance = 1e-3;
  /// Multiply the momentum reconstruction by (-1)^n.
  bool parity_prefactor = false;
  ProjectOptions project;
};

/// At fixed n and X: integral Psi^n(X, P, b) (x - X) phi_n(x; X, P, b) dP db / (pi hbar b).
/// Reproduces psi(x) for x > X; the integrand is odd in x - X, so for x < X
/// the value is -psi(x).
ScaleReconstruction reconstruct_scale_P(const StateSpec& s, int n, double X, double x,
                                        const ScaleIntegralOptions& opts = {});

/// At fixed n and P: integral Psi^n(X, P, b) (p - P) phi~_n(p; X, P, b) dX da / (pi hbar a),
/// optionally times (-1)^n. Reproduces psi~(p) for p > P without the prefactor.
ScaleReconstruction reconstruct_scale_X(const StateSpec& s, int n, double P, double p,
                                        const ScaleIntegralOptions& opts = {});

}  // namespace phasekit::transform
