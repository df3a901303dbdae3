#include "phasekit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "phasekit/basis.hpp"
#include "phasekit/hermite.hpp"
#include "phasekit/kernel.hpp"
#include "phasekit/operators.hpp"
#include "phasekit/quadrature.hpp"
#include "phasekit/transform.hpp"

namespace phasekit::verify {

namespace {

using Complex = std::complex<double>;
namespace ops = phasekit::operators;
namespace tf = phasekit::transform;

// Records |measured - expected| <= tolerance.
void add(VerifyReport& r, std::string name, std::string anchor, double measured, double expected,
         double tol) {
  const bool ok = std::isfinite(measured) && std::abs(measured - expected) <= tol;
  r.checks.push_back({std::move(name), std::move(anchor), measured, expected, tol, ok});
}

double tol(const Json& cfg, const char* key) { return cfg.at("verify").at(key).get<double>(); }

}  // namespace

bool VerifyReport::pass() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

VerifyReport run_suite(const Json& cfg, int workers) {
  VerifyReport r;
  const double hbar = cfg.at("hbar").get<double>();
  const double a = cfg.at("a").get<double>();
  const ScaleParam s(a, hbar);
  const int N = cfg.at("truncation").at("N").get<int>();
  const int gh_order = cfg.at("quadrature").at("gh_order").get<int>();
  const ops::LatticeSettings lattice{cfg.at("grid").at("step_divisor_x").get<double>(),
                                     cfg.at("grid").at("step_divisor_p").get<double>(),
                                     cfg.at("grid").at("extent").get<double>()};
  const int shift = cfg.at("debug").at("eigen_shift").get<int>();
  tf::ProjectOptions popts;
  popts.gh_order = gh_order;
  popts.abs_tol = cfg.at("quadrature").at("abs_tol").get<double>();
  popts.rel_tol = cfg.at("quadrature").at("rel_tol").get<double>();

  {
    double worst = 0.0;
    for (double x : {-1.3, 0.2, 0.9}) {
      for (double u : {-0.4, 0.3}) {
        const double want = std::exp(2.0 * x * u - u * u);
        worst = std::max(worst,
                         std::abs(hermite::generating_function_partial_sum(x, u, 40) / want - 1.0));
      }
    }
    add(r, "hermite_generating_function", "Hermite generating function", worst, 0.0,
        tol(cfg, "hermite"));
  }

  double worst_norm = 0.0;
  double worst_vx = 0.0;
  double worst_vp = 0.0;
  for (int n = 0; n <= 10; ++n) {
    const PhaseIndex idx{n, 0.4 * a, -0.7 * s.b(), s};
    const quadrature::GaussHermite gx{quadrature::default_order(n, n) + 8, idx.X, a};
    const quadrature::GaussHermite gp{quadrature::default_order(n, n) + 8, idx.P, s.b()};
    const double norm =
        quadrature::integrate_1d([&](double x) { return Complex(std::norm(phi(idx, x))); }, gx)
            .real();
    const double vx = quadrature::integrate_1d(
                          [&](double x) {
                            return Complex((x - idx.X) * (x - idx.X) * std::norm(phi(idx, x)));
                          },
                          gx)
                          .real();
    const double vp = quadrature::integrate_1d(
                          [&](double p) {
                            return Complex((p - idx.P) * (p - idx.P) *
                                           std::norm(phi_tilde(idx, p)));
                          },
                          gp)
                          .real();
    const auto d = dispersions(idx);
    worst_norm = std::max(worst_norm, std::abs(norm - 1.0));
    worst_vx = std::max(worst_vx, std::abs(vx / d.variance_x - 1.0));
    worst_vp = std::max(worst_vp, std::abs(vp / d.variance_p - 1.0));
  }
  add(r, "basis_normalization", "unit norm of phi_n", worst_norm, 0.0, tol(cfg, "moments"));
  add(r, "coordinate_dispersion", "coordinate variance (2n+1)A", worst_vx, 0.0,
      tol(cfg, "moments"));
  add(r, "momentum_dispersion", "momentum variance (2n+1)B", worst_vp, 0.0, tol(cfg, "moments"));

  {
    double worst = 0.0;
    for (int n : {0, 2, 5}) {
      const PhaseIndex idx{n, 0.3 * a, 0.5 * s.b(), s};
      for (int k = -8; k <= 8; ++k) {
        const double p = idx.P + 0.5 * k * s.b();
        worst = std::max(worst, std::abs(phi_tilde(idx, p) - fourier_of_phi(idx, p)));
      }
    }
    add(r, "fourier_convention", "momentum wavefunction is the Fourier transform", worst, 0.0,
        tol(cfg, "fourier"));
  }

  std::mt19937_64 rng(7);
  {
    std::uniform_real_distribution<double> pos(-2.0, 2.0);
    std::uniform_real_distribution<double> width(0.4, 2.0);
    std::uniform_int_distribution<int> order(0, 8);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const PhaseIndex l{order(rng), pos(rng) * a, pos(rng) * s.b(), ScaleParam(width(rng) * a, hbar)};
      const PhaseIndex rt{order(rng), pos(rng) * a, pos(rng) * s.b(),
                          ScaleParam(width(rng) * a, hbar)};
      worst = std::max(worst, std::abs(kernel::chi_closed({l, rt}) - kernel::chi_quadrature({l, rt})));
    }
    add(r, "kernel_closed_vs_quadrature", "closed-form overlap kernel", worst, 0.0,
        tol(cfg, "kernel"));
  }

  {
    double worst = 0.0;
    for (int n = 0; n <= 12; ++n) {
      for (int m = 0; m <= 12; ++m) {
        const Complex chi = kernel::chi_closed({{n, 0.2 * a, 0.1 * s.b(), s}, {m, 0.2 * a, 0.1 * s.b(), s}});
        worst = std::max(worst, std::abs(chi - (n == m ? 1.0 : 0.0)));
      }
    }
    add(r, "kernel_orthonormality", "kernel at coincident labels", worst, 0.0,
        tol(cfg, "orthonormality"));
  }

  {
    double worst = 0.0;
    for (int n = 0; n <= 6; ++n) {
      for (int m = 0; m <= 6; ++m) {
        const kernel::KernelArgs args{{n, 0.5 * a, -0.4 * s.b(), s}, {m, -0.3 * a, 0.8 * s.b(), s}};
        worst = std::max(worst, std::abs(kernel::chi_equal_scale(args) - kernel::chi_closed(args)));
      }
    }
    add(r, "kernel_equal_scale", "equal-scale kernel", worst, 0.0, tol(cfg, "orthonormality"));
  }

  {
    const int M = 32;
    const auto c = ops::commutator_check(M);
    double worst = 0.0;
    for (int i = 0; i < M; ++i) {
      for (int j = 0; j < M; ++j) {
        Complex want = 0.0;
        if (i == j) want = Complex(0.0, i == M - 1 ? 1.0 - M : 1.0);
        worst = std::max(worst, std::abs(c(i, j) - want));
      }
    }
    add(r, "commutator_truncation", "truncated commutator i diag(1, ..., 1, 1-N)", worst, 0.0,
        tol(cfg, "matrix"));
    const auto d = ops::matrix_reduced_dispersion(M);
    double worst_d = 0.0;
    for (int i = 0; i + 1 < M; ++i) {
      for (int j = 0; j + 1 < M; ++j) {
        worst_d = std::max(worst_d, std::abs(d(i, j) - (i == j ? (2.0 * i + 1.0) / 4.0 : 0.0)));
      }
    }
    add(r, "reduced_dispersion_matrix", "reduced dispersion diag (2n+1)/4", worst_d, 0.0,
        tol(cfg, "matrix"));
  }

  {
    const double x = 0.3 * a;
    const auto grid = ops::Lattice::centered(x, 0.0, s, lattice);
    double worst = 0.0;
    for (int n = 0; n <= 6; ++n) {
      const ops::FieldBuilder f = [&, n](double X, double P) {
        return std::conj(phi({n, X, P, s}, x));
      };
      worst = std::max(worst, ops::eigen_residual(n, f, grid, s, workers, shift));
    }
    add(r, "dispersion_eigen_residual", "dispersion eigenvalue equation on phi_n*", worst, 0.0,
        tol(cfg, "eigen"));
  }

  {
    const PhaseIndex primed{1, 0.4 * a, -0.3 * s.b(), ScaleParam(0.8 * a, hbar)};
    auto local = lattice;
    local.extent = std::min(local.extent, 6.0);
    const auto grid = ops::Lattice::centered(primed.X, primed.P, s, local);
    double worst = 0.0;
    for (int n : {0, 2, 4}) {
      const ops::FieldBuilder f = [&, n](double X, double P) {
        return kernel::chi_closed({{n, X, P, s}, primed});
      };
      worst = std::max(worst, ops::eigen_residual(n, f, grid, s, workers, shift));
    }
    add(r, "kernel_eigen_residual", "dispersion eigenvalue equation on the kernel", worst, 0.0,
        tol(cfg, "kernel_eigen"));
  }

  const auto packet = StateSpec::gaussian_packet(0.7 * a, 1.2 * a, 0.4 * s.b(), hbar);
  const auto spectrum = tf::project_spectrum(packet, 0.0, 0.0, s, N, popts, workers);
  add(r, "parseval_sum", "sum of |Psi^n|^2", tf::norm_sum(spectrum), 1.0, tol(cfg, "parseval"));

  {
    double worst = 0.0;
    for (int n : {0, 1, 3}) {
      worst = std::max(worst, std::abs(tf::norm_integral(packet, n, s, {0, popts}) - 1.0));
    }
    add(r, "phase_space_density_integral", "integral of |Psi^n|^2 / 2 pi hbar", worst, 0.0,
        tol(cfg, "density"));
  }

  {
    double worst = 0.0;
    const ScaleParam t(0.9 * a, hbar);
    for (int n = 0; n <= 4; ++n) {
      const PhaseIndex target{n, 0.3 * a, -0.2 * s.b(), t};
      const auto moved = kernel::kernel_transport(spectrum, target, cfg.at("tail_tol").get<double>());
      worst = std::max(worst, std::abs(moved.value - tf::project(packet, target, popts)));
    }
    add(r, "kernel_transport", "transport between phase-space frames", worst, 0.0,
        tol(cfg, "transport"));
  }

  {
    double worst = 0.0;
    for (int k = -12; k <= 12; ++k) {
      const double x = 0.5 * k * a;
      worst = std::max(worst, std::abs(tf::reconstruct_sum(spectrum, x) - packet(x)));
    }
    add(r, "reconstruct_sum", "expansion over n at fixed (X, P)", worst, 0.0,
        tol(cfg, "reconstruct_sum"));
  }

  {
    double worst = 0.0;
    for (int n : {0, 3}) {
      for (double x : {-0.8 * a, 0.9 * a}) {
        worst = std::max(worst,
                         std::abs(tf::reconstruct_integral_XP(packet, n, s, x, {0, popts}) - packet(x)));
      }
    }
    add(r, "reconstruct_integral_XP", "integral over X, P at fixed n", worst, 0.0,
        tol(cfg, "reconstruct_XP"));
  }

  {
    tf::ScaleIntegralOptions so;
    so.project = popts;
    so.tolerance = tol(cfg, "reconstruct_scale");
    const double x = 1.1 * a;
    const auto rp = tf::reconstruct_scale_P(packet, 1, 0.0, x, so);
    add(r, "reconstruct_scale_P", "integral over P and b at fixed n, X",
        std::abs(rp.value - packet(x)), 0.0, so.tolerance);
    const double p = 0.9 * s.b();
    const auto rx = tf::reconstruct_scale_X(packet, 1, 0.0, p, so);
    add(r, "reconstruct_scale_X", "integral over X and a at fixed n, P",
        std::abs(rx.value - eval_state_momentum(packet, p)), 0.0, so.tolerance);
  }

  return r;
}

Json to_json(const VerifyReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"anchor", c.anchor},
                          {"measured", c.measured},
                          {"expected", c.expected},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
  }
  return Json{{"checks", std::move(checks)}, {"pass", r.pass()}};
}

}  // namespace phasekit::verify
