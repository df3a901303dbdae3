#include "phasekit/hermite.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "phasekit/errors.hpp"

namespace phasekit::hermite {

namespace {

void require_order(int n) {
  if (n < 0) {
    throw InvalidArgument("Hermite order must be non-negative, got " + std::to_string(n));
  }
}

}  // namespace

double eval(int n, double x) {
  require_order(n);
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void sequence_into(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = 2.0 * x;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    out[k + 1] = 2.0 * x * out[k] - 2.0 * static_cast<double>(k) * out[k - 1];
  }
}

std::vector<double> sequence(int n_max, double x) {
  require_order(n_max);
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  sequence_into(x, out);
  return out;
}

double generating_function_partial_sum(double x, double u, int terms) {
  require_order(terms);
  const auto h = sequence(terms, x);
  double coeff = 1.0;  // u^k / k!
  double sum = 0.0;
  for (int k = 0; k <= terms; ++k) {
    if (k > 0) coeff *= u / k;
    sum += coeff * h[static_cast<std::size_t>(k)];
  }
  return sum;
}

double log_factorial(int n) {
  require_order(n);
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_prefactor(int n, double width) {
  require_order(n);
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw InvalidArgument("Hermite-Gaussian width must be positive and finite");
  }
  const double log_norm_sq = n * std::numbers::ln2 + log_factorial(n) +
                             0.5 * std::log(2.0 * std::numbers::pi) + std::log(width);
  return -0.5 * log_norm_sq;
}

}  // namespace phasekit::hermite
