#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <variant>
#include <vector>

namespace phasekit::quadrature {

using Complex = std::complex<double>;
using Integrand = std::function<Complex(double)>;
using Integrand2d = std::function<Complex(double, double)>;

/// Gauss-Hermite rule over the whole real line after the affine map
/// x = center + width * z. Exact when f(x) * exp(((x-center)/width)^2) is a
/// polynomial of degree < 2 * order.
struct GaussHermite {
  int order = 64;
  double center = 0.0;
  double width = 1.0;
};

/// Adaptive Simpson bisection on [lo, hi] with a Richardson error test.
struct Adaptive {
  double lo = -1.0;
  double hi = 1.0;
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_refinements = 40;
};

using IntegrationSpec = std::variant<GaussHermite, Adaptive>;

/// Nodes and weights for weight function exp(-z^2). `scaled_weights` are
/// w_k * exp(z_k^2), used when the integrand already carries its Gaussian.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> scaled_weights;
};

inline constexpr int kMaxGaussHermiteOrder = 400;

/// Cached rule; tables are built once per order and shared between threads.
std::shared_ptr<const GaussHermiteRule> gauss_hermite_rule(int order);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre_rule(int order);

/// max(64, n + n2 + 24): the default order for Hermite x Gaussian products.
int default_order(int n, int n2 = 0);

/// Throws InvalidArgument for malformed specs.
void validate(const IntegrationSpec& spec);

Complex integrate_1d(const Integrand& f, const IntegrationSpec& spec);

/// Iterated integral: outer variable first, inner rule fixed.
Complex integrate_2d(const Integrand2d& f, const IntegrationSpec& outer,
                     const IntegrationSpec& inner);

/// Iterated integral where the inner rule may depend on the outer coordinate.
Complex integrate_2d(const Integrand2d& f, const IntegrationSpec& outer,
                     const std::function<IntegrationSpec(double)>& inner);

/// Integral of conj(f(x)) * g(x).
Complex inner_product(const Integrand& f, const Integrand& g, const IntegrationSpec& spec);

}  // namespace phasekit::quadrature
