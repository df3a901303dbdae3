#pragma once

#include <complex>

#include "phasekit/quadrature.hpp"
#include "phasekit/scales.hpp"
#include "phasekit/spectrum.hpp"

// Overlap kernel chi^n_{n'}(X, P, b; X', P', b') = <n, X, P, b | n', X', P', b'>.
namespace phasekit::kernel {

using Complex = std::complex<double>;

inline constexpr int kDefaultClosedFormCap = 30;

struct KernelArgs {
  PhaseIndex left;   // bra: n, X, P, b
  PhaseIndex right;  // ket: n', X', P', b'

  /// Both indices valid and sharing hbar.
  void validate() const;
};

/// Direct quadrature of integral phi_n^*(x; left) phi_n'(x; right) dx.
Complex chi_quadrature(const KernelArgs& args, const quadrature::IntegrationSpec& spec);

/// Same, with a Gauss-Hermite rule centred on the product envelope and of
/// order max(64, n + n' + 24).
Complex chi_quadrature(const KernelArgs& args);

/// The product-envelope rule used by chi_quadrature(args).
quadrature::GaussHermite overlap_rule(const KernelArgs& args);

/// Closed form: Gaussian-phase envelope times the double Hermite sum.
/// Throws CapExceeded when n or n' exceeds `cap`.
Complex chi_closed(const KernelArgs& args, int cap = kDefaultClosedFormCap);

/// Equal-scale specialization. Throws InvalidArgument when the scales differ.
Complex chi_equal_scale(const KernelArgs& args, int cap = kDefaultClosedFormCap);

/// chi_closed when n, n' <= cap, chi_quadrature otherwise.
Complex chi(const KernelArgs& args, int cap = kDefaultClosedFormCap);

struct TransportResult {
  Complex value;
  /// sqrt of the spectrum's tail mass; bounds the truncation error.
  double error_bound = 0.0;
};

/// Psi^n at `target` from the spectrum at another phase-space point:
/// sum_{n'} chi^n_{n'}(target; source) Psi^{n'}(source).
/// Terms above the closed-form cap use quadrature. Throws TailTooHeavy when
/// the spectrum's tail bound exceeds `tail_tol`.
TransportResult kernel_transport(const Spectrum& source, const PhaseIndex& target,
                                 double tail_tol = 1e-8, int cap = kDefaultClosedFormCap);

}  // namespace phasekit::kernel
