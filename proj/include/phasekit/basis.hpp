#pragma once

#include <complex>
#include <utility>
#include <variant>
#include <vector>

#include "phasekit/quadrature.hpp"
#include "phasekit/scales.hpp"

namespace phasekit {

using Complex = std::complex<double>;

/// <x|n, X, P, b>: H_n((x-X)/(sqrt2 a)) e^{-((x-X)/2a)^2} e^{iPx/hbar}, unit norm.
Complex phi(const PhaseIndex& idx, double x);

/// <p|n, X, P, b>: (-i)^n H_n((p-P)/(sqrt2 b)) e^{-((p-P)/2b)^2} e^{-iX(p-P)/hbar}.
Complex phi_tilde(const PhaseIndex& idx, double p);

/// (2 pi hbar)^{-1/2} * integral of phi(x) e^{-ipx/hbar} dx, evaluated numerically.
Complex fourier_of_phi(const PhaseIndex& idx, double p, const quadrature::IntegrationSpec& spec);

/// Same, with a Gauss-Hermite rule matched to the envelope of phi.
Complex fourier_of_phi(const PhaseIndex& idx, double p);

/// Gaussian rule whose weight matches the envelope exp(-((x-X)/2a)^2) of phi.
quadrature::GaussHermite basis_rule(const PhaseIndex& idx, int extra_order = 0);

/// Minimum-uncertainty Gaussian with its own width, i.e. phi_0 with a = width.
struct GaussianPacket {
  double center = 0.0;
  double width = 1.0;
  double momentum = 0.0;
  double hbar = 1.0;

  PhaseIndex as_index() const { return {0, center, momentum, ScaleParam(width, hbar)}; }
};

struct HermiteGaussian {
  PhaseIndex index;
};

/// Uniformly sampled coordinate wavefunction, interpolated with local cubics.
class SampledGrid {
 public:
  SampledGrid(std::vector<double> x, std::vector<Complex> values, double hbar = 1.0);

  double lo() const { return x0_; }
  double hi() const { return x0_ + spacing_ * static_cast<double>(values_.size() - 1); }
  double spacing() const { return spacing_; }
  double hbar() const { return hbar_; }
  const std::vector<Complex>& values() const { return values_; }
  std::vector<double> nodes() const;

  /// Throws OutOfDomain outside [lo, hi].
  Complex operator()(double x) const;

 private:
  double x0_ = 0.0;
  double spacing_ = 1.0;
  double hbar_ = 1.0;
  std::vector<Complex> values_;
};

class StateSpec;

struct Superposition {
  std::vector<std::pair<Complex, StateSpec>> terms;
};

/// Position or momentum envelope of a state: mean and standard deviation.
struct Envelope {
  double mean = 0.0;
  double stddev = 1.0;
};

/// An input wavefunction psi(x). Immutable after construction.
class StateSpec {
 public:
  using Variant = std::variant<HermiteGaussian, GaussianPacket, Superposition, SampledGrid>;

  static StateSpec hermite_gaussian(const PhaseIndex& idx);
  static StateSpec gaussian_packet(double center, double width, double momentum,
                                   double hbar = 1.0);
  /// Checks that the superposition is normalized to within 1e-8.
  static StateSpec superposition(std::vector<std::pair<Complex, StateSpec>> terms);
  /// No normalization check; for deliberately scaled states.
  static StateSpec superposition_unchecked(std::vector<std::pair<Complex, StateSpec>> terms);
  static StateSpec sampled_grid(std::vector<double> x, std::vector<Complex> values,
                                double hbar = 1.0);

  const Variant& variant() const { return v_; }

  /// psi(x). Throws OutOfDomain for grid states outside their nodes.
  Complex operator()(double x) const;

  /// Position envelope; closed form for analytic states, quadrature for grids.
  Envelope position_envelope() const;
  /// Momentum envelope; closed form for analytic states, finite differences for grids.
  Envelope momentum_envelope() const;

  /// Interval outside of which psi is negligible (grids: their node range).
  std::pair<double, double> support() const;

  /// integral |psi|^2 dx.
  double norm_squared() const;

  /// Reduced Planck constant the state is expressed in.
  double hbar() const;

 private:
  explicit StateSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

Complex eval_state(const StateSpec& s, double x);

/// Momentum wavefunction psi~(p); analytic for basis states and packets,
/// numerical Fourier transform for sampled grids.
Complex eval_state_momentum(const StateSpec& s, double p);

}  // namespace phasekit
