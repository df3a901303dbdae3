#include "phasekit/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <string>

#include "phasekit/errors.hpp"

namespace phasekit::quadrature {

namespace {

// Orthonormal Hermite recurrence at z, rescaled to stay finite. Returns
// p_n / p_n' and log|p_n'|.
std::pair<double, double> newton_ratio(int n, double z) {
  constexpr double kPiM4 = 0.7511255444649425;  // pi^{-1/4}
  double p1 = kPiM4;
  double p2 = 0.0;
  double log_scale = 0.0;
  for (int j = 0; j < n; ++j) {
    const double p3 = p2;
    p2 = p1;
    p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
    if (std::abs(p1) > 1e100) {
      p1 *= 1e-100;
      p2 *= 1e-100;
      log_scale += 100.0 * std::numbers::ln10;
    }
  }
  const double pp = std::sqrt(2.0 * n) * p2;
  return {p1 / pp, std::log(std::abs(pp)) + log_scale};
}

// Golub-Welsch eigenvalues for the nodes, then a Newton polish so the
// weights come from the recurrence with full relative accuracy.
GaussHermiteRule build_rule(int order) {
  const int n = order;
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.scaled_weights.resize(n);

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int j = 1; j < n; ++j) sub[j - 1] = std::sqrt(0.5 * j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  if (n > 1) {
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw NonConvergence("Gauss-Hermite eigenvalue solve failed for order " + std::to_string(n));
    }
  }

  for (int i = 0; i < n; ++i) {
    double z = n > 1 ? solver.eigenvalues()[i] : 0.0;
    double log_pp = 0.0;
    for (int it = 0; it < 8; ++it) {
      const auto [step, lp] = newton_ratio(n, z);
      log_pp = lp;
      z -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    log_pp = newton_ratio(n, z).second;
    const double log_w = std::numbers::ln2 - 2.0 * log_pp;
    rule.nodes[i] = z;
    rule.weights[i] = std::exp(log_w);
    rule.scaled_weights[i] = std::exp(log_w + z * z);
  }
  // Exact symmetry.
  for (int i = 0; i < n / 2; ++i) {
    const int k = n - 1 - i;
    const double z = 0.5 * (rule.nodes[k] - rule.nodes[i]);
    rule.nodes[i] = -z;
    rule.nodes[k] = z;
    rule.weights[i] = rule.weights[k] = 0.5 * (rule.weights[i] + rule.weights[k]);
    rule.scaled_weights[i] = rule.scaled_weights[k] =
        0.5 * (rule.scaled_weights[i] + rule.scaled_weights[k]);
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

struct RuleCache {
  std::shared_mutex mutex;
  std::map<int, std::shared_ptr<const GaussHermiteRule>> rules;
};

RuleCache& rule_cache() {
  static RuleCache cache;
  return cache;
}

Complex gauss_hermite(const Integrand& f, const GaussHermite& gh) {
  const auto rule = gauss_hermite_rule(gh.order);
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < rule->nodes.size(); ++k) {
    const Complex v = f(gh.center + gh.width * rule->nodes[k]);
    re += rule->scaled_weights[k] * v.real();
    im += rule->scaled_weights[k] * v.imag();
  }
  return {re * gh.width, im * gh.width};
}

struct Panel {
  double lo, hi;
  Complex f_lo, f_mid, f_hi;
  Complex whole;
  int depth;
};

Complex simpson(double lo, double hi, Complex f_lo, Complex f_mid, Complex f_hi) {
  return (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
}

Complex adaptive(const Integrand& f, const Adaptive& spec) {
  constexpr int kInitialPanels = 16;
  const double span = spec.hi - spec.lo;
  std::vector<Panel> stack;
  stack.reserve(128);

  // Coarse pass: seeds the panels and the magnitude used by the relative test.
  Complex coarse{0.0, 0.0};
  std::vector<Panel> initial;
  Complex prev_f = f(spec.lo);
  for (int i = 0; i < kInitialPanels; ++i) {
    const double lo = spec.lo + span * i / kInitialPanels;
    const double hi = (i + 1 == kInitialPanels) ? spec.hi : spec.lo + span * (i + 1) / kInitialPanels;
    const Complex f_mid = f(0.5 * (lo + hi));
    const Complex f_hi = f(hi);
    const Complex s = simpson(lo, hi, prev_f, f_mid, f_hi);
    coarse += s;
    initial.push_back({lo, hi, prev_f, f_mid, f_hi, s, 0});
    prev_f = f_hi;
  }
  const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(coarse));

  // Panels are processed left to right so the summation order is fixed.
  for (auto it = initial.rbegin(); it != initial.rend(); ++it) stack.push_back(*it);
  Complex total{0.0, 0.0};
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (p.lo + p.hi);
    const Complex f_lm = f(0.5 * (p.lo + mid));
    const Complex f_rm = f(0.5 * (mid + p.hi));
    const Complex left = simpson(p.lo, mid, p.f_lo, f_lm, p.f_mid);
    const Complex right = simpson(mid, p.hi, p.f_mid, f_rm, p.f_hi);
    const Complex delta = left + right - p.whole;
    const double local_tol = tol * (p.hi - p.lo) / span;
    if (std::abs(delta) <= 15.0 * local_tol) {
      total += left + right + delta / 15.0;
      continue;
    }
    if (p.depth + 1 >= spec.max_refinements) {
      throw NonConvergence("adaptive quadrature exhausted " + std::to_string(spec.max_refinements) +
                           " refinements on [" + std::to_string(p.lo) + ", " +
                           std::to_string(p.hi) + "]");
    }
    stack.push_back({mid, p.hi, p.f_mid, f_rm, p.f_hi, right, p.depth + 1});
    stack.push_back({p.lo, mid, p.f_lo, f_lm, p.f_mid, left, p.depth + 1});
  }
  return total;
}

}  // namespace

std::shared_ptr<const GaussHermiteRule> gauss_hermite_rule(int order) {
  if (order < 1 || order > kMaxGaussHermiteOrder) {
    throw InvalidArgument("Gauss-Hermite order must lie in [1, " +
                          std::to_string(kMaxGaussHermiteOrder) + "], got " +
                          std::to_string(order));
  }
  auto& cache = rule_cache();
  {
    std::shared_lock lock(cache.mutex);
    if (auto it = cache.rules.find(order); it != cache.rules.end()) return it->second;
  }
  auto rule = std::make_shared<const GaussHermiteRule>(build_rule(order));
  std::unique_lock lock(cache.mutex);
  return cache.rules.try_emplace(order, std::move(rule)).first->second;
}

GaussLegendreRule gauss_legendre_rule(int order) {
  if (order < 1 || order > kMaxGaussHermiteOrder) {
    throw InvalidArgument("Gauss-Legendre order out of range: " + std::to_string(order));
  }
  GaussLegendreRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      dp = order * (z * p1 - p2) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) <= 1e-16) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[order - 1 - i] = z;
    rule.weights[i] = rule.weights[order - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return rule;
}

int default_order(int n, int n2) { return std::max(64, n + n2 + 24); }

void validate(const IntegrationSpec& spec) {
  if (const auto* gh = std::get_if<GaussHermite>(&spec)) {
    if (gh->order < 1 || gh->order > kMaxGaussHermiteOrder) {
      throw InvalidArgument("Gauss-Hermite order must lie in [1, " +
                            std::to_string(kMaxGaussHermiteOrder) + "]");
    }
    if (!(gh->width > 0.0) || !std::isfinite(gh->width) || !std::isfinite(gh->center)) {
      throw InvalidArgument("Gauss-Hermite width must be positive and finite");
    }
    return;
  }
  const auto& ad = std::get<Adaptive>(spec);
  if (!(ad.abs_tol > 0.0) || !(ad.rel_tol > 0.0)) {
    throw InvalidArgument("adaptive tolerances must be positive");
  }
  if (!(ad.hi > ad.lo) || !std::isfinite(ad.lo) || !std::isfinite(ad.hi)) {
    throw InvalidArgument("adaptive domain must be a finite interval with lo < hi");
  }
  if (ad.max_refinements < 1) throw InvalidArgument("max_refinements must be >= 1");
}

Complex integrate_1d(const Integrand& f, const IntegrationSpec& spec) {
  validate(spec);
  if (const auto* gh = std::get_if<GaussHermite>(&spec)) return gauss_hermite(f, *gh);
  return adaptive(f, std::get<Adaptive>(spec));
}

Complex integrate_2d(const Integrand2d& f, const IntegrationSpec& outer,
                     const IntegrationSpec& inner) {
  return integrate_2d(f, outer, [&inner](double) { return inner; });
}

Complex integrate_2d(const Integrand2d& f, const IntegrationSpec& outer,
                     const std::function<IntegrationSpec(double)>& inner) {
  return integrate_1d(
      [&](double u) {
        return integrate_1d([&](double v) { return f(u, v); }, inner(u));
      },
      outer);
}

Complex inner_product(const Integrand& f, const Integrand& g, const IntegrationSpec& spec) {
  return integrate_1d([&](double x) { return std::conj(f(x)) * g(x); }, spec);
}

}  // namespace phasekit::quadrature
