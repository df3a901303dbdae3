#include <doctest.h>

#include <cmath>
#include <random>

#include "phasekit/basis.hpp"
#include "phasekit/errors.hpp"
#include "phasekit/kernel.hpp"
#include "phasekit/operators.hpp"

using namespace phasekit;
using namespace phasekit::operators;
using Complex = std::complex<double>;

namespace {

const Complex I(0.0, 1.0);
const double kRootHalf = std::sqrt(0.5);

FieldBuilder phi_star(int n, double x, const ScaleParam& s) {
  return [=](double X, double P) { return std::conj(phi({n, X, P, s}, x)); };
}

}  // namespace

TEST_CASE("momentum matrix") {
  const auto p2 = matrix_p(2);
  CHECK(std::abs(p2(0, 1) - kRootHalf) < 1e-15);
  CHECK(std::abs(p2(1, 0) - kRootHalf) < 1e-15);
  const auto p3 = matrix_p(3);
  CHECK(std::abs(p3(1, 2) - 1.0) < 1e-15);
  for (int i = 0; i < 3; ++i) CHECK(p3(i, i) == 0.0);
  const auto p = matrix_p(40);
  CHECK(p == p.adjoint());
}

TEST_CASE("coordinate matrix") {
  const auto x2 = matrix_x(2);
  CHECK(std::abs(x2(0, 1) - Complex(0.0, kRootHalf)) < 1e-15);
  CHECK(std::abs(x2(1, 0) - Complex(0.0, -kRootHalf)) < 1e-15);
  const auto x3 = matrix_x(3);
  CHECK(std::abs(x3(2, 1) + I) < 1e-15);
  const auto x = matrix_x(40);
  CHECK(x == x.adjoint());
}

TEST_CASE("truncated commutator") {
  const auto c2 = commutator_check(2);
  CHECK(std::abs(c2(0, 0) - I) < 1e-15);
  CHECK(std::abs(c2(1, 1) + I) < 1e-15);
  CHECK(std::abs(c2(0, 1)) < 1e-15);

  const auto c10 = commutator_check(10);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      if (i == j && i <= 8) CHECK(std::abs(c10(i, j) - I) < 1e-14);
      if (i != j) CHECK(std::abs(c10(i, j)) < 1e-14);
    }
  }
  const auto c1 = commutator_check(1);
  CHECK(c1.rows() == 1);
  CHECK(c1(0, 0) == 0.0);

  for (int N : {16, 64}) {
    const auto c = commutator_check(N);
    double worst = 0.0;
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        const Complex want = i == j ? (i == N - 1 ? Complex(0.0, 1.0 - N) : I) : 0.0;
        worst = std::max(worst, std::abs(c(i, j) - want));
      }
    }
    CHECK(worst < 1e-13);
  }
  CHECK_THROWS_AS(matrix_p(0), InvalidArgument);
}

TEST_CASE("dispersion matrices") {
  const ScaleParam s = ScaleParam::from_momentum_width(0.5);
  const auto d = matrix_dispersion(3, s);
  CHECK(d(0, 0).real() == doctest::Approx(0.25));
  CHECK(d(1, 1).real() == doctest::Approx(0.75));
  CHECK(d(2, 2).real() == doctest::Approx(1.25));
  CHECK(std::abs(d(0, 1)) == 0.0);
  CHECK(matrix_dispersion(5, ScaleParam(0.3))(0, 0).real() ==
        doctest::Approx(ScaleParam(0.3).momentum_unit()).epsilon(1e-15));

  const auto r6 = matrix_reduced_dispersion(6);
  CHECK(std::abs(r6(0, 0) - 0.25) < 1e-15);

  const int N = 24;
  const auto r = matrix_reduced_dispersion(N);
  double worst = 0.0;
  for (int i = 0; i <= N - 3; ++i) {
    for (int j = 0; j <= N - 3; ++j) {
      worst = std::max(worst, std::abs(r(i, j) - (i == j ? (2.0 * i + 1) / 4 : 0.0)));
    }
  }
  CHECK(worst < 1e-13);

  // Full dispersion operator is 4B times the reduced one.
  const ScaleParam t(0.7, 1.3);
  const OperatorMatrix scaled = 4.0 * t.momentum_unit() * r;
  const auto full = matrix_dispersion(N, t);
  for (int i = 0; i <= N - 3; ++i) CHECK(std::abs(scaled(i, i) - full(i, i)) < 1e-13);
}

TEST_CASE("lattice geometry") {
  const ScaleParam s(2.0, 1.0);
  const auto g = Lattice::centered(1.0, -0.5, s, {10.0, 20.0, 3.0});
  CHECK(g.nX == 61);
  CHECK(g.nP == 121);
  CHECK(g.hX == doctest::Approx(0.2));
  CHECK(g.hP == doctest::Approx(s.b() / 20));
  CHECK(g.X(30) == doctest::Approx(1.0));
  CHECK(g.P(60) == doctest::Approx(-0.5));
  const auto t = g.trimmed(2, 3);
  CHECK(t.nX == 57);
  CHECK(t.X(0) == doctest::Approx(g.X(2)));
}

TEST_CASE("dispersion stencil") {
  const ScaleParam s(1.0, 1.0);
  SUBCASE("constant field at X = 0") {
    const Lattice g{-0.01 * 3, -0.5, 0.01, 0.05, 7, 9};
    const auto f = sample_field(g, s, [](double, double) { return Complex(2.5, -1.0); });
    const auto out = fd_apply_dispersion(f);
    CHECK(out.grid.nX == 5);
    CHECK(out.grid.nP == 7);
    CHECK(std::abs(out.at(2, 3)) < 1e-12);
  }
  SUBCASE("ground state eigenvalue") {
    const double x0 = -0.4;
    const auto g = Lattice::centered(x0, 0.0, s, {200.0, 200.0, 4.0});
    const auto f = sample_field(g, s, phi_star(0, x0, s));
    const auto out = fd_apply_dispersion(f);
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < out.grid.nX; ++i) {
      for (int j = 0; j < out.grid.nP; ++j) {
        num += std::norm(out.at(i, j) - s.momentum_unit() * f.at(i + 1, j + 1));
        den += std::norm(s.momentum_unit() * f.at(i + 1, j + 1));
      }
    }
    CHECK(std::sqrt(num / den) < 1e-5);
    CHECK(eigen_residual(0, f) == doctest::Approx(std::sqrt(num / den)).epsilon(1e-12));
  }
  SUBCASE("kernel field") {
    const PhaseIndex primed{0, 0.3, 0.2, s};
    const auto g = Lattice::centered(0.3, 0.2, s, {200.0, 200.0, 4.0});
    const double r = eigen_residual(
        0, [&](double X, double P) { return kernel::chi_closed({{0, X, P, s}, primed}); }, g, s);
    CHECK(r < 1e-5);
  }
  SUBCASE("too small") {
    const Lattice g{0.0, 0.0, 0.1, 0.1, 6, 20};
    const auto f = sample_field(g, s, [](double, double) { return Complex(1.0); });
    CHECK_THROWS_AS(fd_apply_dispersion(f), GridTooSmall);
    CHECK_THROWS_AS(eigen_residual(0, [](double, double) { return Complex(1.0); }, g, s),
                    GridTooSmall);
  }
  SUBCASE("zero field") {
    const Lattice g{0.0, 0.0, 0.1, 0.1, 9, 9};
    CHECK_THROWS_AS(eigen_residual(0, [](double, double) { return Complex(0.0); }, g, s),
                    ZeroField);
  }
}

TEST_CASE("printed coefficients are the implemented operator over B") {
  // The differential operator restated twice in the source carries
  // -hbar^2/(2B) d2X - 2B d2P - (4iB/hbar) X dP + (2B/hbar^2) X^2. Every
  // coefficient equals the implemented one divided by B, so its eigenvalue on
  // phi_n^* is 2n + 1, not (2n+1) B.
  for (double a : {0.5, 1.0, 1.7}) {
    const ScaleParam s(a, 0.9);
    const double B = s.momentum_unit();
    const auto c = dispersion_coefficients(s);
    const double hbar = s.hbar();
    CHECK(c.xx / B == doctest::Approx(-hbar * hbar / (2 * B)).epsilon(1e-14));
    CHECK(c.pp / B == doctest::Approx(-2 * B).epsilon(1e-14));
    CHECK(std::abs(c.xp / B - Complex(0.0, -4 * B / hbar)) < 1e-14 * 4 * B / hbar);
    CHECK(c.x2 / B == doctest::Approx(2 * B / (hbar * hbar)).epsilon(1e-14));
  }
  // Residual of the printed operator against (2n+1) B vanishes only when B = 1.
  const ScaleParam s(1.0, 1.0);
  const auto g = Lattice::centered(0.0, 0.0, s, {100.0, 100.0, 4.0});
  const double r = eigen_residual(1, phi_star(1, 0.2, s), g, s);
  CHECK(r < 1e-4);
}

TEST_CASE("residual convergence and negative control") {
  const ScaleParam s(0.8, 1.2);
  const double x0 = 0.5;
  const auto coarse = Lattice::centered(x0, 0.0, s, {50.0, 50.0, 4.0});
  const auto fine = Lattice::centered(x0, 0.0, s, {100.0, 100.0, 4.0});
  for (int n : {0, 2}) {
    const double rc = eigen_residual(n, phi_star(n, x0, s), coarse, s);
    const double rf = eigen_residual(n, phi_star(n, x0, s), fine, s);
    CHECK(rc / rf >= 3.5);
    CHECK(rc / rf <= 4.5);
  }
  const double control = eigen_residual(0, phi_star(0, x0, s), coarse, s, 0, 1);
  CHECK(control > 0.1);
  CHECK(control == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("residual does not depend on the worker count") {
  const ScaleParam s(1.0);
  const auto g = Lattice::centered(0.1, 0.0, s, {60.0, 60.0, 4.0});
  const double r1 = eigen_residual(3, phi_star(3, 0.1, s), g, s, 1);
  for (int w : {2, 3, 7}) CHECK(eigen_residual(3, phi_star(3, 0.1, s), g, s, w) == r1);
  const auto f1 = sample_field(g, s, phi_star(2, 0.1, s), 1);
  const auto f4 = sample_field(g, s, phi_star(2, 0.1, s), 4);
  CHECK(f1.values == f4.values);
  CHECK(fd_apply_dispersion(f1, 1).values == fd_apply_dispersion(f1, 5).values);
}

TEST_CASE("composed reduced operators agree with the direct stencil") {
  // Smooth random field: a few random Gaussians with random phases.
  const ScaleParam s(1.0, 1.0);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  struct Bump {
    double x, p, w, kx, kp;
    Complex c;
  };
  std::vector<Bump> bumps;
  for (int k = 0; k < 4; ++k) {
    bumps.push_back({u(rng), 0.5 * u(rng), 1.5 + 0.5 * u(rng), 0.5 * u(rng), 0.5 * u(rng),
                     Complex(u(rng), u(rng))});
  }
  auto f = [&](double X, double P) {
    Complex sum = 0.0;
    for (const auto& b : bumps) {
      const double g = std::exp(-((X - b.x) * (X - b.x) + 4 * (P - b.p) * (P - b.p)) / (2 * b.w * b.w));
      sum += b.c * g * std::exp(Complex(0.0, b.kx * X + b.kp * P));
    }
    return sum;
  };
  // composed lives on a two-cell margin; direct on one. Both are second
  // order, so the gap shrinks fourfold per halving.
  auto gap = [&](double divisor) {
    const auto g = Lattice::centered(0.0, 0.0, s, {divisor, divisor, 3.0});
    const auto field = sample_field(g, s, f);
    const auto direct = fd_apply_dispersion(field);
    const auto composed = fd_apply_reduced_composed(field);
    double num = 0.0;
    double den = 0.0;
    const double B4 = 4 * s.momentum_unit();
    for (int i = 0; i < composed.grid.nX; ++i) {
      for (int j = 0; j < composed.grid.nP; ++j) {
        const Complex a = direct.at(i + 1, j + 1);
        num += std::norm(a - B4 * composed.at(i, j));
        den += std::norm(a);
      }
    }
    return std::sqrt(num / den);
  };
  const double coarse = gap(100.0);
  const double fine = gap(200.0);
  CHECK(fine < 1e-5);
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.05));
}
