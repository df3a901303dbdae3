#include "phasekit/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "phasekit/basis.hpp"
#include "phasekit/errors.hpp"
#include "phasekit/hermite.hpp"

namespace phasekit::kernel {

namespace {

void check_cap(const KernelArgs& args, int cap) {
  if (args.left.n > cap || args.right.n > cap) {
    throw CapExceeded("closed-form kernel capped at order " + std::to_string(cap) + ", got (" +
                      std::to_string(args.left.n) + ", " + std::to_string(args.right.n) + ")");
  }
}

// (-1)^s * i^t as an exact unit complex number.
Complex sign_phase(int s, int t) {
  static constexpr Complex kIPow[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  const Complex u = kIPow[t % 4];
  return (s % 2 == 0) ? u : -u;
}

// The double sum over l <= n, m <= n' shared by both closed forms. `log_norm`
// carries every l,m-independent factor; `log_b_left`/`log_b_right` are the
// logs of b and b' (zero for the equal-scale form, whose powers cancel).
Complex hermite_double_sum(int n, int n2, double alpha, double beta, double log_norm,
                           double log_b_left, double log_b_right) {
  // Extended precision: the alternating terms cancel heavily at high order.
  using Real = long double;
  const int top = n + n2;
  auto hermite_ld = [top](Real x) {
    std::vector<Real> h(static_cast<std::size_t>(top) + 1);
    h[0] = 1.0L;
    if (top > 0) h[1] = 2.0L * x;
    for (int k = 1; k < top; ++k) h[k + 1] = 2.0L * x * h[k] - 2.0L * k * h[k - 1];
    return h;
  };
  const auto h_alpha = hermite_ld(alpha);
  const auto h_beta = hermite_ld(beta);
  std::vector<Real> log_fact(static_cast<std::size_t>(std::max(n, n2)) + 1, 0.0L);
  for (std::size_t k = 1; k < log_fact.size(); ++k) {
    log_fact[k] = log_fact[k - 1] + std::log(static_cast<Real>(k));
  }
  Real re = 0.0L;
  Real im = 0.0L;
  for (int l = 0; l <= n; ++l) {
    for (int m = 0; m <= n2; ++m) {
      const Real hh = h_alpha[static_cast<std::size_t>(top - l - m)] *
                      h_beta[static_cast<std::size_t>(l + m)];
      if (hh == 0.0L) continue;
      const Real log_mag = static_cast<Real>(log_norm) +
                           (n - l + m) * static_cast<Real>(log_b_right) +
                           (n2 - m + l) * static_cast<Real>(log_b_left) - log_fact[l] -
                           log_fact[n - l] - log_fact[m] - log_fact[n2 - m];
      const Real term = std::exp(log_mag) * hh;
      const Complex ph = sign_phase(n2 - m, l + m);
      re += static_cast<Real>(ph.real()) * term;
      im += static_cast<Real>(ph.imag()) * term;
    }
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

}  // namespace

void KernelArgs::validate() const {
  left.validate();
  right.validate();
  const double h = left.scale.hbar();
  if (std::abs(right.scale.hbar() - h) > 1e-12 * h) {
    throw InvalidArgument("kernel arguments must share hbar");
  }
}

quadrature::GaussHermite overlap_rule(const KernelArgs& args) {
  const double a = args.left.scale.a();
  const double a2 = args.right.scale.a();
  const double s = a * a + a2 * a2;
  const double center = (a2 * a2 * args.left.X + a * a * args.right.X) / s;
  const double width = 2.0 * a * a2 / std::sqrt(s);
  return {quadrature::default_order(args.left.n, args.right.n), center, width};
}

Complex chi_quadrature(const KernelArgs& args, const quadrature::IntegrationSpec& spec) {
  args.validate();
  return quadrature::inner_product([&](double x) { return phi(args.left, x); },
                                   [&](double x) { return phi(args.right, x); }, spec);
}

Complex chi_quadrature(const KernelArgs& args) {
  args.validate();
  return chi_quadrature(args, overlap_rule(args));
}

Complex chi_closed(const KernelArgs& args, int cap) {
  args.validate();
  check_cap(args, cap);
  const auto& L = args.left;
  const auto& R = args.right;
  const double hbar = L.scale.hbar();
  const double a = L.scale.a();
  const double a2 = R.scale.a();
  const double b = L.scale.b();
  const double b2 = R.scale.b();
  const double sa = a * a + a2 * a2;
  const double sb = b * b + b2 * b2;
  const double dX = L.X - R.X;
  const double dP = L.P - R.P;

  const double envelope_log = -dX * dX / (4.0 * sa) - dP * dP / (4.0 * sb);
  const double envelope_phase = -(a2 * a2 * L.X + a * a * R.X) * dP / (hbar * sa);

  const double alpha = -dX / std::sqrt(2.0 * sa);
  const double beta = -dP / std::sqrt(2.0 * sb);
  const int n = L.n;
  const int n2 = R.n;
  // 2 sqrt(n! n'!) (b')^{1/2} b^{1/2} / [2 (b^2 + b'^2)]^{(n+n'+1)/2}
  const double log_norm = std::numbers::ln2 +
                          0.5 * (hermite::log_factorial(n) + hermite::log_factorial(n2)) +
                          0.5 * std::log(b2) + 0.5 * std::log(b) -
                          0.5 * (n + n2 + 1) * std::log(2.0 * sb);
  const Complex poly =
      hermite_double_sum(n, n2, alpha, beta, log_norm, std::log(b), std::log(b2));
  return poly * std::polar(std::exp(envelope_log), envelope_phase);
}

Complex chi_equal_scale(const KernelArgs& args, int cap) {
  args.validate();
  const auto& L = args.left;
  const auto& R = args.right;
  const double a = L.scale.a();
  if (std::abs(R.scale.a() - a) > 1e-12 * a) {
    throw InvalidArgument("chi_equal_scale requires equal scales on both sides");
  }
  check_cap(args, cap);
  const double hbar = L.scale.hbar();
  const double b = L.scale.b();
  const double dX = L.X - R.X;
  const double dP = L.P - R.P;
  // The cross phase involves the sum X + X' under the e^{iPx/hbar} convention.
  const double envelope_log = -dX * dX / (8.0 * a * a) - dP * dP / (8.0 * b * b);
  const double envelope_phase = -(L.X + R.X) * dP / (2.0 * hbar);

  const int n = L.n;
  const int n2 = R.n;
  const double log_norm = 0.5 * (hermite::log_factorial(n) + hermite::log_factorial(n2)) -
                          (n + n2) * std::numbers::ln2;
  const Complex poly =
      hermite_double_sum(n, n2, -dX / (2.0 * a), -dP / (2.0 * b), log_norm, 0.0, 0.0);
  return poly * std::polar(std::exp(envelope_log), envelope_phase);
}

Complex chi(const KernelArgs& args, int cap) {
  if (args.left.n <= cap && args.right.n <= cap) return chi_closed(args, cap);
  return chi_quadrature(args);
}

TransportResult kernel_transport(const Spectrum& source, const PhaseIndex& target, double tail_tol,
                                 int cap) {
  target.validate();
  if (source.amplitudes.empty()) throw InvalidArgument("kernel_transport: empty spectrum");
  if (source.tail_bound > tail_tol) {
    throw TailTooHeavy("spectrum tail mass " + std::to_string(source.tail_bound) +
                       " exceeds tolerance " + std::to_string(tail_tol));
  }
  Complex sum{0.0, 0.0};
  for (int k = 0; k <= source.max_order(); ++k) {
    const auto amp = source.amplitudes[static_cast<std::size_t>(k)];
    sum += chi({target, source.index(k)}, cap) * amp;
  }
  return {sum, std::sqrt(std::max(source.tail_bound, 0.0))};
}

}  // namespace phasekit::kernel
