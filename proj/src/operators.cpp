#include "phasekit/operators.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "phasekit/errors.hpp"
#include "phasekit/parallel.hpp"

namespace phasekit::operators {

namespace {

constexpr int kMinInterior = 5;

void require_dim(int N) {
  if (N < 1) throw InvalidArgument("matrix dimension must be >= 1, got " + std::to_string(N));
}

void require_stencil_support(const Lattice& g, int margin) {
  if (g.nX - 2 * margin < kMinInterior || g.nP - 2 * margin < kMinInterior) {
    throw GridTooSmall("lattice " + std::to_string(g.nX) + "x" + std::to_string(g.nP) +
                       " leaves fewer than " + std::to_string(kMinInterior) +
                       " interior nodes per direction");
  }
  if (!(g.hX > 0.0) || !(g.hP > 0.0)) throw InvalidArgument("lattice steps must be positive");
}

// Applies the dispersion stencil to interior row `mid` (X = x_mid); `out`
// receives nP - 2 values.
void stencil_row(const DispersionCoefficients& c, const Lattice& g, double x_mid,
                 const Complex* down, const Complex* mid, const Complex* up, Complex* out) {
  const double inv_hx2 = 1.0 / (g.hX * g.hX);
  const double inv_hp2 = 1.0 / (g.hP * g.hP);
  const double inv_2hp = 1.0 / (2.0 * g.hP);
  const Complex xp = c.xp * x_mid;
  const double x2 = c.x2 * x_mid * x_mid;
  for (int j = 1; j + 1 < g.nP; ++j) {
    const Complex d2x = (up[j] - 2.0 * mid[j] + down[j]) * inv_hx2;
    const Complex d2p = (mid[j + 1] - 2.0 * mid[j] + mid[j - 1]) * inv_hp2;
    const Complex dp = (mid[j + 1] - mid[j - 1]) * inv_2hp;
    out[j - 1] = c.xx * d2x + c.pp * d2p + xp * dp + x2 * mid[j];
  }
}

PhaseField subfield(const PhaseField& f, int mx, int mp) {
  PhaseField out{f.grid.trimmed(mx, mp), f.scale, {}};
  out.values.resize(out.grid.size());
  for (int i = 0; i < out.grid.nX; ++i) {
    for (int j = 0; j < out.grid.nP; ++j) out.at(i, j) = f.at(i + mx, j + mp);
  }
  return out;
}

// p~ f = sqrt2 b (i df/dP - X f / hbar), one-cell P margin.
PhaseField apply_p_tilde(const PhaseField& f) {
  const double b = f.scale.b();
  const double hbar = f.scale.hbar();
  PhaseField out{f.grid.trimmed(0, 1), f.scale, {}};
  out.values.resize(out.grid.size());
  for (int i = 0; i < out.grid.nX; ++i) {
    const double X = out.grid.X(i);
    for (int j = 0; j < out.grid.nP; ++j) {
      const Complex d = (f.at(i, j + 2) - f.at(i, j)) / (2.0 * f.grid.hP);
      out.at(i, j) = std::numbers::sqrt2 * b * (Complex(0.0, 1.0) * d - X / hbar * f.at(i, j + 1));
    }
  }
  return out;
}

// x~ f = -i sqrt2 a df/dX, one-cell X margin.
PhaseField apply_x_tilde(const PhaseField& f) {
  const double a = f.scale.a();
  PhaseField out{f.grid.trimmed(1, 0), f.scale, {}};
  out.values.resize(out.grid.size());
  for (int i = 0; i < out.grid.nX; ++i) {
    for (int j = 0; j < out.grid.nP; ++j) {
      const Complex d = (f.at(i + 2, j) - f.at(i, j)) / (2.0 * f.grid.hX);
      out.at(i, j) = Complex(0.0, -std::numbers::sqrt2 * a) * d;
    }
  }
  return out;
}

}  // namespace

OperatorMatrix matrix_p(int N) {
  require_dim(N);
  OperatorMatrix m = OperatorMatrix::Zero(N, N);
  for (int k = 1; k < N; ++k) {
    const double v = std::sqrt(static_cast<double>(k)) / std::numbers::sqrt2;
    m(k - 1, k) = v;
    m(k, k - 1) = v;
  }
  return m;
}

OperatorMatrix matrix_x(int N) {
  require_dim(N);
  OperatorMatrix m = OperatorMatrix::Zero(N, N);
  for (int k = 1; k < N; ++k) {
    const double v = std::sqrt(static_cast<double>(k)) / std::numbers::sqrt2;
    m(k - 1, k) = Complex(0.0, v);
    m(k, k - 1) = Complex(0.0, -v);
  }
  return m;
}

OperatorMatrix commutator_check(int N) {
  const OperatorMatrix x = matrix_x(N);
  const OperatorMatrix p = matrix_p(N);
  return x * p - p * x;
}

OperatorMatrix matrix_reduced_dispersion(int N) {
  const OperatorMatrix x = matrix_x(N);
  const OperatorMatrix p = matrix_p(N);
  return 0.25 * (p * p + x * x);
}

OperatorMatrix matrix_dispersion(int N, const ScaleParam& scale) {
  require_dim(N);
  OperatorMatrix m = OperatorMatrix::Zero(N, N);
  for (int k = 0; k < N; ++k) m(k, k) = (2.0 * k + 1.0) * scale.momentum_unit();
  return m;
}

// ---------------------------------------------------------------------------

Lattice Lattice::centered(double Xc, double Pc, const ScaleParam& scale,
                          const LatticeSettings& s) {
  if (!(s.step_divisor_x > 0.0) || !(s.step_divisor_p > 0.0) || !(s.extent > 0.0)) {
    throw InvalidArgument("lattice settings must be positive");
  }
  Lattice g;
  g.hX = scale.a() / s.step_divisor_x;
  g.hP = scale.b() / s.step_divisor_p;
  const int half_x = static_cast<int>(std::ceil(s.extent * s.step_divisor_x));
  const int half_p = static_cast<int>(std::ceil(s.extent * s.step_divisor_p));
  g.nX = 2 * half_x + 1;
  g.nP = 2 * half_p + 1;
  g.X0 = Xc - half_x * g.hX;
  g.P0 = Pc - half_p * g.hP;
  return g;
}

Lattice Lattice::trimmed(int mx, int mp) const {
  Lattice g = *this;
  g.X0 += mx * hX;
  g.P0 += mp * hP;
  g.nX -= 2 * mx;
  g.nP -= 2 * mp;
  if (g.nX < 1 || g.nP < 1) throw GridTooSmall("lattice trimmed to nothing");
  return g;
}

PhaseField sample_field(const Lattice& grid, const ScaleParam& scale, const FieldBuilder& builder,
                        int workers) {
  PhaseField f{grid, scale, std::vector<Complex>(grid.size())};
  parallel_blocks(static_cast<std::size_t>(grid.nX), workers, [&](std::size_t b, std::size_t e) {
    for (auto i = static_cast<int>(b); i < static_cast<int>(e); ++i) {
      const double X = grid.X(i);
      for (int j = 0; j < grid.nP; ++j) f.at(i, j) = builder(X, grid.P(j));
    }
  });
  return f;
}

DispersionCoefficients dispersion_coefficients(const ScaleParam& scale) {
  const double hbar = scale.hbar();
  const double B = scale.momentum_unit();
  return {-0.5 * hbar * hbar, -2.0 * B * B, Complex(0.0, -4.0 * B * B / hbar),
          2.0 * B * B / (hbar * hbar)};
}

PhaseField fd_apply_dispersion(const PhaseField& field, int workers) {
  require_stencil_support(field.grid, 1);
  const auto c = dispersion_coefficients(field.scale);
  PhaseField out{field.grid.trimmed(1, 1), field.scale, {}};
  out.values.resize(out.grid.size());
  const int nP = field.grid.nP;
  parallel_blocks(static_cast<std::size_t>(out.grid.nX), workers,
                  [&](std::size_t b, std::size_t e) {
                    for (auto r = static_cast<int>(b); r < static_cast<int>(e); ++r) {
                      const int i = r + 1;
                      const Complex* base = field.values.data();
                      stencil_row(c, field.grid, field.grid.X(i), base + (i - 1) * nP,
                                  base + i * nP, base + (i + 1) * nP, &out.at(r, 0));
                    }
                  });
  return out;
}

PhaseField fd_apply_reduced_composed(const PhaseField& field) {
  require_stencil_support(field.grid, 2);
  const PhaseField pp = apply_p_tilde(apply_p_tilde(field));  // P margin 2
  const PhaseField xx = apply_x_tilde(apply_x_tilde(field));  // X margin 2
  PhaseField p2 = subfield(pp, 2, 0);
  const PhaseField x2 = subfield(xx, 0, 2);
  for (std::size_t k = 0; k < p2.values.size(); ++k) {
    p2.values[k] = 0.25 * (p2.values[k] + x2.values[k]);
  }
  return p2;
}

double eigen_residual(int n, const FieldBuilder& builder, const Lattice& grid,
                      const ScaleParam& scale, int workers, int eigen_shift) {
  require_stencil_support(grid, 1);
  const auto c = dispersion_coefficients(scale);
  const double lambda = (2.0 * (n + eigen_shift) + 1.0) * scale.momentum_unit();
  const int interior = grid.nX - 2;
  const int nP = grid.nP;
  std::vector<double> num(static_cast<std::size_t>(interior));
  std::vector<double> den(static_cast<std::size_t>(interior));

  parallel_blocks(static_cast<std::size_t>(interior), workers, [&](std::size_t b, std::size_t e) {
    // Ring of three sampled rows; halo rows are re-sampled per block.
    std::vector<Complex> rows(3 * static_cast<std::size_t>(nP));
    std::vector<Complex> out(static_cast<std::size_t>(nP - 2));
    auto fill = [&](int i, Complex* dst) {
      const double X = grid.X(i);
      for (int j = 0; j < nP; ++j) dst[j] = builder(X, grid.P(j));
    };
    auto slot = [&](int i) { return rows.data() + static_cast<std::size_t>(i % 3) * nP; };
    const int first = static_cast<int>(b) + 1;
    fill(first - 1, slot(first - 1));
    fill(first, slot(first));
    for (int i = first; i < static_cast<int>(e) + 1; ++i) {
      fill(i + 1, slot(i + 1));
      const Complex* mid = slot(i);
      stencil_row(c, grid, grid.X(i), slot(i - 1), mid, slot(i + 1), out.data());
      double rn = 0.0;
      double rd = 0.0;
      for (int j = 1; j + 1 < nP; ++j) {
        rn += std::norm(out[j - 1] - lambda * mid[j]);
        rd += std::norm(mid[j]);
      }
      num[static_cast<std::size_t>(i - 1)] = rn;
      den[static_cast<std::size_t>(i - 1)] = rd;
    }
  });

  double total_num = 0.0;
  double total_den = 0.0;
  for (int r = 0; r < interior; ++r) {
    total_num += num[static_cast<std::size_t>(r)];
    total_den += den[static_cast<std::size_t>(r)];
  }
  if (!(std::sqrt(total_den) >= 1e-300)) {
    throw ZeroField("eigencandidate vanishes on the lattice interior");
  }
  return std::sqrt(total_num) / (std::abs(lambda) * std::sqrt(total_den));
}

double eigen_residual(int n, const PhaseField& field, int workers) {
  const PhaseField applied = fd_apply_dispersion(field, workers);
  const double lambda = (2.0 * n + 1.0) * field.scale.momentum_unit();
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < applied.grid.nX; ++i) {
    for (int j = 0; j < applied.grid.nP; ++j) {
      const Complex f = field.at(i + 1, j + 1);
      num += std::norm(applied.at(i, j) - lambda * f);
      den += std::norm(f);
    }
  }
  if (!(std::sqrt(den) >= 1e-300)) throw ZeroField("field vanishes on the lattice interior");
  return std::sqrt(num) / (lambda * std::sqrt(den));
}

}  // namespace phasekit::operators
