#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "phasekit/basis.hpp"
#include "phasekit/errors.hpp"
#include "phasekit/kernel.hpp"
#include "phasekit/operators.hpp"
#include "phasekit/transform.hpp"

using namespace phasekit;
using namespace phasekit::transform;
using Complex = std::complex<double>;

namespace {

StateSpec grid_of(const StateSpec& s, double lo, double hi, int nodes) {
  std::vector<double> x;
  std::vector<Complex> v;
  for (int k = 0; k < nodes; ++k) {
    x.push_back(lo + (hi - lo) * k / (nodes - 1));
    v.push_back(s(x.back()));
  }
  return StateSpec::sampled_grid(std::move(x), std::move(v), s.hbar());
}

}  // namespace

TEST_CASE("projection examples") {
  const ScaleParam s(1.1, 0.9);
  const PhaseIndex idx{3, 0.2, -0.6, s};
  CHECK(std::abs(project(StateSpec::hermite_gaussian(idx), idx) - 1.0) < 1e-13);

  const PhaseIndex other{2, -0.5, 0.4, ScaleParam(0.7, 0.9)};
  CHECK(std::abs(project(StateSpec::hermite_gaussian(other), idx) -
                 kernel::chi_closed({idx, other})) < 1e-15);

  const auto packet = StateSpec::gaussian_packet(0.2, 1.1, -0.6, 0.9);
  CHECK(std::abs(project(packet, {1, 0.2, -0.6, s})) < 1e-15);
}

TEST_CASE("routes agree") {
  const auto packet = StateSpec::gaussian_packet(0.4, 0.8, 0.3);
  const ScaleParam s(1.0);
  ProjectOptions quad;
  quad.route = Route::quadrature;
  ProjectOptions closed;
  closed.route = Route::closed_form;
  for (int n = 0; n <= 10; ++n) {
    const PhaseIndex idx{n, -0.3, 0.5, s};
    CHECK(std::abs(project(packet, idx, quad) - project(packet, idx, closed)) < 1e-9);
  }
  closed.cap = 4;
  CHECK_THROWS_AS(project(packet, {5, 0.0, 0.0, s}, closed), CapExceeded);
  ProjectOptions automatic;
  automatic.cap = 4;
  CHECK(std::abs(project(packet, {5, 0.0, 0.0, s}, automatic) - project(packet, {5, 0.0, 0.0, s})) < 1e-9);

  const auto g = grid_of(packet, -9.0, 9.0, 3601);
  for (int n : {0, 3, 7}) {
    const PhaseIndex idx{n, -0.3, 0.5, s};
    CHECK(std::abs(project(g, idx) - project(packet, idx)) < 1e-9);
  }
  CHECK_THROWS_AS(project(packet, {0, 0.0, 0.0, ScaleParam(1.0, 2.0)}), InvalidArgument);
}

TEST_CASE("spectra") {
  const ScaleParam s(1.0);
  const auto basis2 = StateSpec::hermite_gaussian({2, 0.3, 0.1, s});
  const auto sp = project_spectrum(basis2, 0.3, 0.1, s, 5);
  for (int n = 0; n <= 5; ++n) CHECK(std::abs(sp.amplitudes[n] - (n == 2 ? 1.0 : 0.0)) < 1e-13);
  CHECK(norm_sum(sp) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(sp.tail_bound > -1e-10);
  CHECK(norm_sum(project_spectrum(basis2, 0.3, 0.1, s, 1)) < 1e-26);

  // Displaced packet: |Psi^0|^2 = |chi_0^0|^2 = e^{-1/4} for a shift of a.
  const auto displaced = StateSpec::gaussian_packet(1.0, 1.0, 0.0);
  const auto d = project_spectrum(displaced, 0.0, 0.0, s, 30);
  CHECK(std::norm(d.amplitudes[0]) == doctest::Approx(std::exp(-0.25)).epsilon(1e-14));
  CHECK(std::norm(d.amplitudes[0]) ==
        doctest::Approx(std::norm(kernel::chi_closed({{0, 0.0, 0.0, s}, {0, 1.0, 0.0, s}}))).epsilon(1e-14));
  CHECK(norm_sum(d) == doctest::Approx(1.0).epsilon(1e-10));

  CHECK(project_spectrum(displaced, 0.0, 0.0, s, 0).amplitudes.size() == 1);
  CHECK_THROWS_AS(project_spectrum(displaced, 0.0, 0.0, s, -1), InvalidArgument);
}

TEST_CASE("Parseval at random points") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const ScaleParam s(1.0 + 0.3 * u(rng));
    const auto p1 = StateSpec::gaussian_packet(u(rng), 1.0 + 0.25 * u(rng), u(rng));
    const auto p2 = StateSpec::hermite_gaussian({k % 4, u(rng), u(rng), ScaleParam(1.0 + 0.2 * u(rng))});
    const auto state = k % 2 == 0
                           ? p1
                           : StateSpec::superposition_unchecked({{std::sqrt(0.5), p2}, {Complex(0.0, std::sqrt(0.5)), p2}});
    const auto sp = project_spectrum(state, u(rng), u(rng), s, 40);
    const double deficit = 1.0 - norm_sum(sp);
    CHECK(deficit >= -1e-10);
    CHECK(deficit <= 1e-8);
  }
}

TEST_CASE("phase-space density integral") {
  const ScaleParam s(1.0);
  const auto packet = StateSpec::gaussian_packet(0.0, 1.0, 0.0);
  for (int n : {0, 1, 3}) CHECK(norm_integral(packet, n, s) == doctest::Approx(1.0).epsilon(1e-4));
  const auto half = StateSpec::superposition_unchecked({{std::sqrt(0.5), packet}});
  CHECK(norm_integral(half, 1, s) == doctest::Approx(0.5).epsilon(1e-4));
  const auto excited = StateSpec::hermite_gaussian({4, 0.5, -0.5, ScaleParam(0.7)});
  CHECK(norm_integral(excited, 2, s) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("reconstruction by summation") {
  const ScaleParam s(1.0);
  const PhaseIndex idx{3, 0.2, 0.4, s};
  const auto basis3 = StateSpec::hermite_gaussian(idx);
  const auto sp = project_spectrum(basis3, 0.2, 0.4, s, 6);
  for (double x : {-1.0, 0.0, 0.7, 2.4}) CHECK(std::abs(reconstruct_sum(sp, x) - phi(idx, x)) < 1e-14);

  const auto packet = StateSpec::gaussian_packet(1.0, 1.0, 0.0);
  const auto d = project_spectrum(packet, 0.0, 0.0, s, 30);
  double worst = 0.0;
  for (int k = 0; k <= 120; ++k) {
    const double x = -6.0 + 0.1 * k;
    worst = std::max(worst, std::abs(reconstruct_sum(d, x) - packet(x)));
  }
  CHECK(worst < 1e-7);
  CHECK(std::abs(reconstruct_sum(d, 10.0) - packet(10.0)) < 1e-9);
  CHECK(std::abs(reconstruct_sum_momentum(d, 0.3) - eval_state_momentum(packet, 0.3)) < 1e-10);

  const auto short_sp = project_spectrum(StateSpec::gaussian_packet(4.0, 1.0, 0.0), 0.0, 0.0, s, 3);
  CHECK_THROWS_AS(reconstruct_sum(short_sp, 0.0), TailTooHeavy);
  CHECK_THROWS_AS(reconstruct_sum_momentum(short_sp, 0.0), TailTooHeavy);
}

TEST_CASE("reconstruction over the phase plane") {
  const ScaleParam s(1.0);
  const auto packet = StateSpec::gaussian_packet(0.0, 1.0, 0.0);
  const Complex r0 = reconstruct_integral_XP(packet, 0, s, 0.0);
  const Complex r3 = reconstruct_integral_XP(packet, 3, s, 0.0);
  CHECK(std::abs(r0 - packet(0.0)) < 1e-4);
  CHECK(std::abs(r3 - packet(0.0)) < 1e-4);
  CHECK(std::abs(r0 - r3) < 1e-4);
  const auto odd = StateSpec::hermite_gaussian({1, 0.0, 0.0, ScaleParam(1.0)});
  CHECK(std::abs(reconstruct_integral_XP(odd, 2, s, 0.0)) < 1e-10);
}

TEST_CASE("reconstruction over position and momentum scale") {
  const auto packet = StateSpec::gaussian_packet(0.0, 1.0, 0.0);
  const double a = 1.0;
  const auto rp = reconstruct_scale_P(packet, 0, 0.0, a);
  CHECK(std::abs(rp.value - packet(a)) < 1e-2 * std::abs(packet(a)));
  CHECK(rp.window_sensitivity < 10 * rp.tolerance);

  // Odd in x - X: the identity yields -psi(x) on the other side.
  const auto left = reconstruct_scale_P(packet, 0, 0.0, -a);
  CHECK(std::abs(left.value + packet(-a)) < 1e-2 * std::abs(packet(-a)));

  const auto odd = StateSpec::hermite_gaussian({1, 0.0, 0.0, ScaleParam(1.0)});
  CHECK(std::abs(reconstruct_scale_P(odd, 2, -0.5, 0.0).value) < 1e-3);
  CHECK(std::abs(reconstruct_scale_P(packet, 0, 0.0, 10.0).value) < 1e-6);

  const double b = 0.5;
  const auto rx = reconstruct_scale_X(packet, 0, 0.0, b);
  const Complex want = eval_state_momentum(packet, b);
  CHECK(std::abs(rx.value - want) < 1e-2 * std::abs(want));
  CHECK(std::abs(reconstruct_scale_X(packet, 0, 0.0, 20 * b).value) < 1e-6);

  SUBCASE("parity prefactor ablation") {
    ScaleIntegralOptions with;
    with.parity_prefactor = true;
    const auto plain = reconstruct_scale_X(packet, 1, 0.0, b);
    const auto flipped = reconstruct_scale_X(packet, 1, 0.0, b, with);
    CHECK(std::abs(plain.value - want) < 1e-2 * std::abs(want));
    CHECK(std::abs(flipped.value + want) < 1e-2 * std::abs(want));
  }

  SUBCASE("window sensitivity") {
    ScaleIntegralOptions narrow;
    narrow.window = 3.0;
    narrow.tolerance = 1e-6;
    CHECK_THROWS_AS(reconstruct_scale_P(packet, 0, 0.0, a, narrow), WindowSensitive);
    narrow.window = 0.5;
    CHECK_THROWS_AS(reconstruct_scale_P(packet, 0, 0.0, a, narrow), InvalidArgument);
  }
}

TEST_CASE("phase-space wavefunctions satisfy the dispersion equation") {
  const ScaleParam s(1.0);
  const auto packet = StateSpec::gaussian_packet(0.3, 1.2, -0.2);
  const auto grid = operators::Lattice::centered(0.3, -0.2, s, {100.0, 100.0, 5.0});
  for (int n = 0; n <= 6; ++n) {
    const double r = operators::eigen_residual(
        n, [&](double X, double P) { return project(packet, {n, X, P, s}); }, grid, s);
    CHECK_MESSAGE(r < 1e-4, "n = ", n);
  }
  ProjectOptions quad;
  quad.route = Route::quadrature;
  const auto coarse = operators::Lattice::centered(0.3, -0.2, s, {50.0, 50.0, 4.0});
  const double r = operators::eigen_residual(
      2, [&](double X, double P) { return project(packet, {2, X, P, s}, quad); }, coarse, s);
  CHECK(r < 1e-4);
}
