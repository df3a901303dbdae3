#pragma once

#include <span>
#include <vector>

// Physicists' Hermite polynomials H_n, generating function e^{2xu-u^2}.
namespace phasekit::hermite {

/// Orders up to this value are covered by the accuracy tests.
inline constexpr int kTestedMaxOrder = 60;

/// H_n(x) by the three-term recurrence H_{k+1} = 2x H_k - 2k H_{k-1}.
double eval(int n, double x);

/// [H_0(x), ..., H_{n_max}(x)]; element k is bitwise equal to eval(k, x).
std::vector<double> sequence(int n_max, double x);

/// Fills out[k] = H_k(x) for k < out.size().
void sequence_into(double x, std::span<double> out);

/// sum_{k=0}^{terms} u^k / k! * H_k(x).
double generating_function_partial_sum(double x, double u, int terms);

/// ln(n!) via lgamma.
double log_factorial(int n);

/// ln of 1 / sqrt(2^n n! sqrt(2 pi) width), the normalization of a
/// Hermite-Gaussian function of half-width `width`. Throws InvalidArgument
/// for width <= 0 or n < 0.
double log_prefactor(int n, double width);

}  // namespace phasekit::hermite
