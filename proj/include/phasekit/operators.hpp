#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "phasekit/scales.hpp"

namespace phasekit::operators {

using Complex = std::complex<double>;
using OperatorMatrix = Eigen::MatrixXcd;

// Matrix elements are indexed (row n, column m) = <n| op |m> in the basis
// |n, X, P, b>, truncated to n, m < N.

/// Reduced momentum: (1/sqrt2)(sqrt(m) d_{m-1,n} + sqrt(m+1) d_{m+1,n}).
OperatorMatrix matrix_p(int N);

/// Reduced coordinate: (i/sqrt2)(sqrt(m) d_{m-1,n} - sqrt(m+1) d_{m+1,n}).
OperatorMatrix matrix_x(int N);

/// [x, p] of the truncated matrices; i * diag(1, ..., 1, 1-N).
OperatorMatrix commutator_check(int N);

/// (p^2 + x^2) / 4 from the truncated products. Diagonal (2n+1)/4 except on
/// the last index, which the cut contaminates.
OperatorMatrix matrix_reduced_dispersion(int N);

/// Momentum dispersion operator, diag((2n+1) B).
OperatorMatrix matrix_dispersion(int N, const ScaleParam& scale);

// ---------------------------------------------------------------------------
// Differential representation on an (X, P) lattice.

struct LatticeSettings {
  /// h_X = a / step_divisor_x, h_P = b / step_divisor_p.
  double step_divisor_x = 200.0;
  double step_divisor_p = 200.0;
  /// Half extents in units of a (X direction) and b (P direction).
  double extent = 8.0;
};

/// Uniform rectangular lattice; node (i, j) sits at (X0 + i hX, P0 + j hP).
struct Lattice {
  double X0 = 0.0;
  double P0 = 0.0;
  double hX = 1.0;
  double hP = 1.0;
  int nX = 0;
  int nP = 0;

  double X(int i) const { return X0 + hX * i; }
  double P(int j) const { return P0 + hP * j; }
  std::size_t size() const { return static_cast<std::size_t>(nX) * static_cast<std::size_t>(nP); }

  /// Lattice centered on (Xc, Pc) with steps and extents from `settings`.
  static Lattice centered(double Xc, double Pc, const ScaleParam& scale,
                          const LatticeSettings& settings = {});
  /// The same lattice with `mx` / `mp` boundary cells removed on each side.
  Lattice trimmed(int mx, int mp) const;
};

/// Complex samples of a function of (X, P); row-major with X as the slow index.
struct PhaseField {
  Lattice grid;
  ScaleParam scale;
  std::vector<Complex> values;

  Complex& at(int i, int j) { return values[static_cast<std::size_t>(i) * grid.nP + j]; }
  const Complex& at(int i, int j) const {
    return values[static_cast<std::size_t>(i) * grid.nP + j];
  }
};

using FieldBuilder = std::function<Complex(double X, double P)>;

/// Samples `builder` over the lattice, parallel over X rows.
PhaseField sample_field(const Lattice& grid, const ScaleParam& scale, const FieldBuilder& builder,
                        int workers = 0);

/// Coefficients of c_xx d2/dX2 + c_pp d2/dP2 + c_xp X d/dP + c_x2 X^2.
struct DispersionCoefficients {
  double xx = 0.0;
  double pp = 0.0;
  Complex xp{0.0, 0.0};
  double x2 = 0.0;
};

/// The differential dispersion operator 4B * (p~^2 + x~^2)/4 written out:
/// -(hbar^2/2) d2/dX2 - 2B^2 d2/dP2 - (4iB^2/hbar) X d/dP + (2B^2/hbar^2) X^2.
/// Its eigenvalue on phi_n^*(x; X, P, b) is (2n+1) B.
DispersionCoefficients dispersion_coefficients(const ScaleParam& scale);

/// Second-order central differences of the dispersion operator. The result
/// lives on the interior lattice (one-cell margin stripped). Throws
/// GridTooSmall when either direction has fewer than 5 interior nodes.
PhaseField fd_apply_dispersion(const PhaseField& field, int workers = 0);

/// (p~^2 + x~^2)/4 built by composing central first differences of
/// p~ = sqrt2 b (i d/dP - X/hbar) and x~ = -i sqrt2 a d/dX. Two-cell margin.
PhaseField fd_apply_reduced_composed(const PhaseField& field);

/// || D f - (2n+1) B f ||_2 / || (2n+1) B f ||_2 over interior nodes, with
/// f sampled from `builder` row by row (no full lattice is stored). The sum is
/// reduced in row order, so the result does not depend on `workers`.
/// `eigen_shift` offsets n in the tested eigenvalue (negative controls).
/// Throws ZeroField when ||f||_2 < 1e-300 on the interior.
double eigen_residual(int n, const FieldBuilder& builder, const Lattice& grid,
                      const ScaleParam& scale, int workers = 0, int eigen_shift = 0);

/// Residual of a stored field against the eigenvalue (2n+1) B.
double eigen_residual(int n, const PhaseField& field, int workers = 0);

}  // namespace phasekit::operators
