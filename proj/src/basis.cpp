#include "phasekit/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phasekit/errors.hpp"
#include "phasekit/hermite.hpp"

namespace phasekit {

namespace {

constexpr double kSupportWidths = 12.0;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// H_n(y) * exp(log_scale), combined in log space.
double hermite_times_exp(int n, double y, double log_scale) {
  const double h = hermite::eval(n, y);
  if (h == 0.0) return 0.0;
  return std::copysign(std::exp(std::log(std::abs(h)) + log_scale), h);
}

Complex minus_i_pow(int n) {
  switch (n % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

Envelope mixture(const std::vector<std::pair<double, Envelope>>& parts) {
  double mass = 0.0;
  double mean = 0.0;
  for (const auto& [w, e] : parts) {
    mass += w;
    mean += w * e.mean;
  }
  if (!(mass > 0.0)) return {};
  mean /= mass;
  double var = 0.0;
  for (const auto& [w, e] : parts) {
    var += w * (e.stddev * e.stddev + (e.mean - mean) * (e.mean - mean));
  }
  return {mean, std::sqrt(var / mass)};
}

Envelope index_position(const PhaseIndex& idx) {
  return {idx.X, std::sqrt(2.0 * idx.n + 1.0) * idx.scale.a()};
}

Envelope index_momentum(const PhaseIndex& idx) {
  return {idx.P, std::sqrt(2.0 * idx.n + 1.0) * idx.scale.b()};
}

}  // namespace

Complex phi(const PhaseIndex& idx, double x) {
  idx.validate();
  const double a = idx.scale.a();
  const double d = x - idx.X;
  const double y = d / (std::numbers::sqrt2 * a);
  const double g = d / (2.0 * a);
  const double modulus = hermite_times_exp(idx.n, y, hermite::log_prefactor(idx.n, a) - g * g);
  return modulus * std::polar(1.0, idx.P * x / idx.scale.hbar());
}

Complex phi_tilde(const PhaseIndex& idx, double p) {
  idx.validate();
  const double b = idx.scale.b();
  const double d = p - idx.P;
  const double y = d / (std::numbers::sqrt2 * b);
  const double g = d / (2.0 * b);
  const double modulus = hermite_times_exp(idx.n, y, hermite::log_prefactor(idx.n, b) - g * g);
  return minus_i_pow(idx.n) * modulus * std::polar(1.0, -idx.X * d / idx.scale.hbar());
}

quadrature::GaussHermite basis_rule(const PhaseIndex& idx, int extra_order) {
  return {quadrature::default_order(idx.n) + extra_order, idx.X, 2.0 * idx.scale.a()};
}

Complex fourier_of_phi(const PhaseIndex& idx, double p, const quadrature::IntegrationSpec& spec) {
  const double hbar = idx.scale.hbar();
  const Complex integral = quadrature::integrate_1d(
      [&](double x) { return phi(idx, x) * std::polar(1.0, -p * x / hbar); }, spec);
  return integral / std::sqrt(2.0 * std::numbers::pi * hbar);
}

Complex fourier_of_phi(const PhaseIndex& idx, double p) {
  return fourier_of_phi(idx, p, basis_rule(idx));
}

// ---------------------------------------------------------------------------

SampledGrid::SampledGrid(std::vector<double> x, std::vector<Complex> values, double hbar)
    : hbar_(hbar), values_(std::move(values)) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidArgument("hbar must be positive and finite");
  if (x.size() != values_.size()) {
    throw InvalidArgument("sampled grid: node and value counts differ");
  }
  if (x.size() < 4) throw InvalidArgument("sampled grid needs at least 4 nodes");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw InvalidArgument("sampled grid nodes must be strictly increasing");
  }
  x0_ = x.front();
  spacing_ = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i] - (x0_ + spacing_ * static_cast<double>(i))) > 1e-6 * spacing_) {
      throw InvalidArgument("sampled grid nodes must be uniformly spaced");
    }
    if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag())) {
      throw InvalidArgument("sampled grid values must be finite");
    }
  }
}

std::vector<double> SampledGrid::nodes() const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x0_ + spacing_ * static_cast<double>(i);
  return out;
}

Complex SampledGrid::operator()(double x) const {
  const double slack = 1e-12 * spacing_;
  if (!(x >= lo() - slack && x <= hi() + slack)) {
    throw OutOfDomain("sampled grid evaluated at x = " + std::to_string(x) + " outside [" +
                      std::to_string(lo()) + ", " + std::to_string(hi()) + "]");
  }
  const double t = (x - x0_) / spacing_;
  const auto last_start = static_cast<std::ptrdiff_t>(values_.size()) - 4;
  const auto start =
      std::clamp(static_cast<std::ptrdiff_t>(std::floor(t)) - 1, std::ptrdiff_t{0}, last_start);
  const double u = t - static_cast<double>(start);
  // Four-point Lagrange weights on nodes start..start+3.
  const double l0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
  const double l1 = u * (u - 2.0) * (u - 3.0) / 2.0;
  const double l2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
  const double l3 = u * (u - 1.0) * (u - 2.0) / 6.0;
  const auto* v = values_.data() + start;
  return l0 * v[0] + l1 * v[1] + l2 * v[2] + l3 * v[3];
}

// ---------------------------------------------------------------------------

StateSpec StateSpec::hermite_gaussian(const PhaseIndex& idx) {
  idx.validate();
  return StateSpec(HermiteGaussian{idx});
}

StateSpec StateSpec::gaussian_packet(double center, double width, double momentum, double hbar) {
  GaussianPacket g{center, width, momentum, hbar};
  g.as_index().validate();  // also validates width and hbar
  return StateSpec(g);
}

StateSpec StateSpec::superposition_unchecked(std::vector<std::pair<Complex, StateSpec>> terms) {
  if (terms.empty()) throw InvalidArgument("superposition needs at least one term");
  const double h = terms.front().second.hbar();
  for (const auto& [c, s] : terms) {
    if (std::abs(s.hbar() - h) > 1e-12 * h) {
      throw InvalidArgument("superposition components must share hbar");
    }
  }
  return StateSpec(Superposition{std::move(terms)});
}

StateSpec StateSpec::superposition(std::vector<std::pair<Complex, StateSpec>> terms) {
  StateSpec s = superposition_unchecked(std::move(terms));
  const double norm = s.norm_squared();
  if (std::abs(norm - 1.0) > 1e-8) {
    throw InvalidArgument("superposition is not normalized: integral |psi|^2 = " +
                          std::to_string(norm));
  }
  return s;
}

StateSpec StateSpec::sampled_grid(std::vector<double> x, std::vector<Complex> values,
                                  double hbar) {
  return StateSpec(SampledGrid(std::move(x), std::move(values), hbar));
}

Complex StateSpec::operator()(double x) const {
  return std::visit(Overloaded{
                        [&](const HermiteGaussian& h) { return phi(h.index, x); },
                        [&](const GaussianPacket& g) { return phi(g.as_index(), x); },
                        [&](const Superposition& s) {
                          Complex sum{0.0, 0.0};
                          for (const auto& [c, t] : s.terms) sum += c * t(x);
                          return sum;
                        },
                        [&](const SampledGrid& g) { return g(x); },
                    },
                    v_);
}

double StateSpec::hbar() const {
  return std::visit(Overloaded{
                        [](const HermiteGaussian& h) { return h.index.scale.hbar(); },
                        [](const GaussianPacket& g) { return g.hbar; },
                        [](const Superposition& s) { return s.terms.front().second.hbar(); },
                        [](const SampledGrid& g) { return g.hbar(); },
                    },
                    v_);
}

namespace {

// Node-sum moments of a sampled grid (trapezoid on the nodes).
Envelope grid_position(const SampledGrid& g) {
  const auto x = g.nodes();
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = std::norm(g.values()[i]);
    m0 += w;
    m1 += w * x[i];
    m2 += w * x[i] * x[i];
  }
  if (!(m0 > 0.0)) throw ZeroField("sampled grid is identically zero");
  const double mean = m1 / m0;
  return {mean, std::sqrt(std::max(m2 / m0 - mean * mean, 0.0))};
}

Envelope grid_momentum(const SampledGrid& g, double hbar) {
  const auto& v = g.values();
  const double h = g.spacing();
  double m0 = 0.0;
  Complex m1{0.0, 0.0};
  double m2 = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const Complex d = (v[i + 1] - v[i - 1]) / (2.0 * h);
    m0 += std::norm(v[i]);
    m1 += std::conj(v[i]) * Complex(0.0, -hbar) * d;
    m2 += hbar * hbar * std::norm(d);
  }
  if (!(m0 > 0.0)) throw ZeroField("sampled grid is identically zero");
  const double mean = m1.real() / m0;
  return {mean, std::sqrt(std::max(m2 / m0 - mean * mean, 0.0))};
}

}  // namespace

Envelope StateSpec::position_envelope() const {
  return std::visit(Overloaded{
                        [](const HermiteGaussian& h) { return index_position(h.index); },
                        [](const GaussianPacket& g) { return index_position(g.as_index()); },
                        [](const Superposition& s) {
                          std::vector<std::pair<double, Envelope>> parts;
                          for (const auto& [c, t] : s.terms) {
                            parts.emplace_back(std::norm(c), t.position_envelope());
                          }
                          return mixture(parts);
                        },
                        [](const SampledGrid& g) { return grid_position(g); },
                    },
                    v_);
}

Envelope StateSpec::momentum_envelope() const {
  return std::visit(Overloaded{
                        [](const HermiteGaussian& h) { return index_momentum(h.index); },
                        [](const GaussianPacket& g) { return index_momentum(g.as_index()); },
                        [](const Superposition& s) {
                          std::vector<std::pair<double, Envelope>> parts;
                          for (const auto& [c, t] : s.terms) {
                            parts.emplace_back(std::norm(c), t.momentum_envelope());
                          }
                          return mixture(parts);
                        },
                        [this](const SampledGrid& g) { return grid_momentum(g, hbar()); },
                    },
                    v_);
}

std::pair<double, double> StateSpec::support() const {
  return std::visit(
      Overloaded{
          [](const HermiteGaussian& h) {
            const auto e = index_position(h.index);
            return std::pair{e.mean - kSupportWidths * e.stddev, e.mean + kSupportWidths * e.stddev};
          },
          [](const GaussianPacket& g) {
            const auto e = index_position(g.as_index());
            return std::pair{e.mean - kSupportWidths * e.stddev, e.mean + kSupportWidths * e.stddev};
          },
          [](const Superposition& s) {
            auto range = s.terms.front().second.support();
            for (const auto& [c, t] : s.terms) {
              const auto r = t.support();
              range.first = std::min(range.first, r.first);
              range.second = std::max(range.second, r.second);
            }
            return range;
          },
          [](const SampledGrid& g) { return std::pair{g.lo(), g.hi()}; },
      },
      v_);
}

double StateSpec::norm_squared() const {
  if (std::holds_alternative<HermiteGaussian>(v_) || std::holds_alternative<GaussianPacket>(v_)) {
    return 1.0;
  }
  const auto [lo, hi] = support();
  const quadrature::Adaptive spec{lo, hi, 1e-14, 1e-12, 50};
  return quadrature::integrate_1d([this](double x) { return Complex(std::norm((*this)(x)), 0.0); },
                                  spec)
      .real();
}

Complex eval_state(const StateSpec& s, double x) { return s(x); }

Complex eval_state_momentum(const StateSpec& s, double p) {
  return std::visit(
      Overloaded{
          [&](const HermiteGaussian& h) { return phi_tilde(h.index, p); },
          [&](const GaussianPacket& g) { return phi_tilde(g.as_index(), p); },
          [&](const Superposition& sup) {
            Complex sum{0.0, 0.0};
            for (const auto& [c, t] : sup.terms) sum += c * eval_state_momentum(t, p);
            return sum;
          },
          [&](const SampledGrid& g) {
            const double hbar = s.hbar();
            const quadrature::Adaptive spec{g.lo(), g.hi(), 1e-13, 1e-10, 50};
            const Complex integral = quadrature::integrate_1d(
                [&](double x) { return g(x) * std::polar(1.0, -p * x / hbar); }, spec);
            return integral / std::sqrt(2.0 * std::numbers::pi * hbar);
          },
      },
      s.variant());
}

}  // namespace phasekit
