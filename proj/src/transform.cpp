#include "phasekit/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "phasekit/errors.hpp"
#include "phasekit/parallel.hpp"

namespace phasekit::transform {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same_hbar(const StateSpec& s, const ScaleParam& scale) {
  if (std::abs(s.hbar() - scale.hbar()) > 1e-12 * scale.hbar()) {
    throw InvalidArgument("state and basis must share hbar");
  }
}

Complex project_analytic(const PhaseIndex& state, const PhaseIndex& idx,
                         const ProjectOptions& opts) {
  const kernel::KernelArgs args{idx, state};
  const bool closed = opts.route != Route::quadrature && idx.n <= opts.cap && state.n <= opts.cap;
  if (closed) return kernel::chi_closed(args, opts.cap);
  if (opts.route == Route::closed_form) {
    throw CapExceeded("closed-form projection requested above the order cap");
  }
  auto rule = kernel::overlap_rule(args);
  if (opts.gh_order > 0) rule.order = opts.gh_order;
  return kernel::chi_quadrature(args, rule);
}

Complex project_grid(const SampledGrid& g, const PhaseIndex& idx, const ProjectOptions& opts) {
  const double reach = 12.0 * std::sqrt(2.0 * idx.n + 1.0) * idx.scale.a();
  const double lo = std::max(g.lo(), idx.X - reach);
  const double hi = std::min(g.hi(), idx.X + reach);
  if (!(hi > lo)) return {0.0, 0.0};
  const quadrature::Adaptive spec{lo, hi, opts.abs_tol, opts.rel_tol, 50};
  return quadrature::integrate_1d([&](double x) { return std::conj(phi(idx, x)) * g(x); }, spec);
}

// Mean and squared Gaussian parameter of a state in each variable: a'^2 and
// b'^2 for basis states and packets, the variance otherwise.
struct GaussianShape {
  double mx = 0.0;
  double gx2 = 0.0;
  double mp = 0.0;
  double gp2 = 0.0;
};

GaussianShape gaussian_shape(const StateSpec& s) {
  const auto ex = s.position_envelope();
  const auto ep = s.momentum_envelope();
  GaussianShape g{ex.mean, ex.stddev * ex.stddev, ep.mean, ep.stddev * ep.stddev};
  if (const auto* h = std::get_if<HermiteGaussian>(&s.variant())) {
    g.gx2 = h->index.scale.coord_unit();
    g.gp2 = h->index.scale.momentum_unit();
  }
  return g;
}

int phase_space_order(const PhaseSpaceOptions& opts, int n) {
  return opts.order > 0 ? opts.order : std::max(64, 2 * n + 48);
}

// Composite Gauss-Legendre over [lo, hi] in `panels` equal pieces.
template <class F>
Complex composite_legendre(double lo, double hi, int panels, int nodes, F&& f) {
  const auto rule = quadrature::gauss_legendre_rule(nodes);
  const double h = (hi - lo) / panels;
  Complex sum{0.0, 0.0};
  for (int k = 0; k < panels; ++k) {
    const double mid = lo + (k + 0.5) * h;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      sum += (0.5 * h * rule.weights[q]) * f(mid + 0.5 * h * rule.nodes[q]);
    }
  }
  return sum;
}

// Integrates g(s) over the log-scale window [-ln W, ln W] around ln(ref) and
// over the two extra strips that doubling W adds.
template <class F>
ScaleReconstruction log_window_integral(double ref, const ScaleIntegralOptions& opts, F&& g) {
  if (!(opts.window > 1.0)) throw InvalidArgument("scale window must exceed 1");
  if (opts.panels < 1 || opts.nodes_per_panel < 1) {
    throw InvalidArgument("scale integral needs at least one panel and node");
  }
  const double centre = std::log(ref);
  const double half = std::log(opts.window);
  const double extra = std::numbers::ln2;
  const Complex core = composite_legendre(centre - half, centre + half, opts.panels,
                                          opts.nodes_per_panel, g);
  const int strip_panels = std::max(1, static_cast<int>(std::ceil(opts.panels * extra / (2 * half))));
  const Complex ends =
      composite_legendre(centre - half - extra, centre - half, strip_panels, opts.nodes_per_panel, g) +
      composite_legendre(centre + half, centre + half + extra, strip_panels, opts.nodes_per_panel, g);
  ScaleReconstruction out{core, std::abs(ends), opts.tolerance};
  if (out.window_sensitivity > 10.0 * opts.tolerance) {
    throw WindowSensitive("doubling the scale window moved the reconstruction by " +
                          std::to_string(out.window_sensitivity));
  }
  return out;
}

}  // namespace

Complex project(const StateSpec& s, const PhaseIndex& idx, const ProjectOptions& opts) {
  idx.validate();
  require_same_hbar(s, idx.scale);
  return std::visit(
      Overloaded{
          [&](const HermiteGaussian& h) { return project_analytic(h.index, idx, opts); },
          [&](const GaussianPacket& g) { return project_analytic(g.as_index(), idx, opts); },
          [&](const Superposition& sup) {
            Complex sum{0.0, 0.0};
            for (const auto& [c, t] : sup.terms) sum += c * project(t, idx, opts);
            return sum;
          },
          [&](const SampledGrid& g) { return project_grid(g, idx, opts); },
      },
      s.variant());
}

Spectrum project_spectrum(const StateSpec& s, double X, double P, const ScaleParam& scale, int N,
                          const ProjectOptions& opts, int workers) {
  if (N < 0) throw InvalidArgument("spectrum truncation N must be non-negative");
  Spectrum sp{X, P, scale, std::vector<Complex>(static_cast<std::size_t>(N) + 1), 0.0};
  parallel_blocks(sp.amplitudes.size(), workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t n = b; n < e; ++n) {
      sp.amplitudes[n] = project(s, sp.index(static_cast<int>(n)), opts);
    }
  });
  sp.tail_bound = s.norm_squared() - norm_sum(sp);
  return sp;
}

double norm_sum(const Spectrum& sp) {
  double sum = 0.0;
  for (const auto& c : sp.amplitudes) sum += std::norm(c);
  return sum;
}

double norm_integral(const StateSpec& s, int n, const ScaleParam& scale,
                     const PhaseSpaceOptions& opts) {
  require_same_hbar(s, scale);
  const auto g = gaussian_shape(s);
  const int order = phase_space_order(opts, n);
  // |Psi^n|^2 carries exp(-(X-mx)^2 / 2(gx2 + A) - (P-mp)^2 / 2(gp2 + B)).
  const quadrature::GaussHermite outer{order, g.mx,
                                       std::numbers::sqrt2 * std::sqrt(g.gx2 + scale.coord_unit())};
  const quadrature::GaussHermite inner{
      order, g.mp, std::numbers::sqrt2 * std::sqrt(g.gp2 + scale.momentum_unit())};
  const Complex total = quadrature::integrate_2d(
      [&](double X, double P) {
        return Complex(std::norm(project(s, {n, X, P, scale}, opts.project)), 0.0);
      },
      outer, inner);
  return total.real() / (kTwoPi * scale.hbar());
}

Complex reconstruct_sum(const Spectrum& sp, double x, double tail_tol) {
  if (!(sp.tail_bound < tail_tol)) {
    throw TailTooHeavy("spectrum tail bound " + std::to_string(sp.tail_bound) +
                       " is not below " + std::to_string(tail_tol));
  }
  Complex sum{0.0, 0.0};
  for (int n = 0; n <= sp.max_order(); ++n) {
    sum += sp.amplitudes[static_cast<std::size_t>(n)] * phi(sp.index(n), x);
  }
  return sum;
}

Complex reconstruct_sum_momentum(const Spectrum& sp, double p, double tail_tol) {
  if (!(sp.tail_bound < tail_tol)) {
    throw TailTooHeavy("spectrum tail bound " + std::to_string(sp.tail_bound) +
                       " is not below " + std::to_string(tail_tol));
  }
  Complex sum{0.0, 0.0};
  for (int n = 0; n <= sp.max_order(); ++n) {
    sum += sp.amplitudes[static_cast<std::size_t>(n)] * phi_tilde(sp.index(n), p);
  }
  return sum;
}

Complex reconstruct_integral_XP(const StateSpec& s, int n, const ScaleParam& scale, double x,
                                const PhaseSpaceOptions& opts) {
  require_same_hbar(s, scale);
  const auto g = gaussian_shape(s);
  const int order = phase_space_order(opts, n);
  // Gaussian factors of the integrand: exp(-(X-mx)^2 / 4(gx2 + A)) from Psi^n,
  // exp(-(x-X)^2 / 4A) from phi_n, and exp(-(P-mp)^2 / 4(gp2 + B)) from Psi^n.
  const double A = scale.coord_unit();
  const double wx = 1.0 / (4.0 * (g.gx2 + A));
  const double wa = 1.0 / (4.0 * A);
  const quadrature::GaussHermite outer{order, (wx * g.mx + wa * x) / (wx + wa),
                                       1.0 / std::sqrt(wx + wa)};
  const quadrature::GaussHermite inner{order, g.mp,
                                       2.0 * std::sqrt(g.gp2 + scale.momentum_unit())};
  const Complex total = quadrature::integrate_2d(
      [&](double X, double P) {
        const PhaseIndex idx{n, X, P, scale};
        return project(s, idx, opts.project) * phi(idx, x);
      },
      outer, inner);
  return total / (kTwoPi * scale.hbar());
}

ScaleReconstruction reconstruct_scale_P(const StateSpec& s, int n, double X, double x,
                                        const ScaleIntegralOptions& opts) {
  if (n < 0) throw InvalidArgument("n must be non-negative");
  const double hbar = s.hbar();
  const auto pp = s.momentum_envelope();
  const auto g = gaussian_shape(s);
  const double ref = opts.reference > 0.0 ? opts.reference : pp.stddev;
  const int order = opts.inner_order > 0 ? opts.inner_order : std::max(96, 2 * n + 64);
  // phi_n is a pure phase in P, so only Psi^n shapes the inner integrand.
  // Variable of integration: s = ln b, so db / b = ds.
  return log_window_integral(ref, opts, [&](double log_b) {
    const double b = std::exp(log_b);
    const auto scale = ScaleParam::from_momentum_width(b, hbar);
    const quadrature::GaussHermite inner{order, g.mp, 2.0 * std::sqrt(g.gp2 + b * b)};
    const Complex over_p = quadrature::integrate_1d(
        [&](double P) {
          const PhaseIndex idx{n, X, P, scale};
          return project(s, idx, opts.project) * (x - X) * phi(idx, x);
        },
        inner);
    return over_p / (std::numbers::pi * hbar);
  });
}

ScaleReconstruction reconstruct_scale_X(const StateSpec& s, int n, double P, double p,
                                        const ScaleIntegralOptions& opts) {
  if (n < 0) throw InvalidArgument("n must be non-negative");
  const double hbar = s.hbar();
  const auto px = s.position_envelope();
  const auto g = gaussian_shape(s);
  const double ref = opts.reference > 0.0 ? opts.reference : px.stddev;
  const int order = opts.inner_order > 0 ? opts.inner_order : std::max(96, 2 * n + 64);
  const double sign = (opts.parity_prefactor && n % 2 == 1) ? -1.0 : 1.0;
  // Variable of integration: s = ln a, so da / a = ds.
  auto out = log_window_integral(ref, opts, [&](double log_a) {
    const double a = std::exp(log_a);
    const ScaleParam scale(a, hbar);
    const quadrature::GaussHermite inner{order, g.mx, 2.0 * std::sqrt(g.gx2 + a * a)};
    const Complex over_x = quadrature::integrate_1d(
        [&](double X) {
          const PhaseIndex idx{n, X, P, scale};
          return project(s, idx, opts.project) * (p - P) * phi_tilde(idx, p);
        },
        inner);
    return over_x / (std::numbers::pi * hbar);
  });
  out.value *= sign;
  return out;
}

}  // namespace phasekit::transform
