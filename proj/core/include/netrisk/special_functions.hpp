#pragma once

#include <functional>

namespace netrisk {

// Scalar special functions used by the risk formulas. All bisections use a
// fixed bracket, a 200-iteration cap and absolute tolerance 1e-11, so results
// are deterministic across platforms.

// Error function and inverse, implemented from scratch (Maclaurin series for
// small arguments, Lentz continued fraction for the complementary function
// elsewhere). |error| < 1e-12 over the real line; erf(-x) == -erf(x) exactly.
double erf(double x);
double erfc(double x);

// Inverse of erf on (-1, 1). Throws config_error outside the open interval.
double erf_inv(double p);

// f(x) = cos(x) / (2 x (1 - sin x)) on the open interval (0, pi/2).
// Kernel of every steady-state variance term. Throws config_error outside.
double f_energy(double x);

// d/dx f(x), used by the monotonicity report and the z_plus check.
double f_energy_derivative(double x);

// Positive solution of cos(z) = z, the minimizer of f_energy.
double z_plus();

// Smallest delta >= 0 with (erf(delta) + erf(delta + 2 alpha)) / 2 >= 1 - eps.
// Requires eps in (0,1) and alpha >= 0. S_eps(0) == erf_inv(1 - eps).
double s_epsilon(double eps, double alpha);

// Mean and variance of |y| for y ~ N(mu, sigma^2).
struct FoldedMoments {
  double mean = 0.0;
  double variance = 0.0;
};
FoldedMoments folded_moments(double mu, double sigma);

// kappa(mu, sigma) from the exponential-utility risk expression:
//   E[e^{beta |y|}] = e^{beta^2 sigma^2 / 2} * kappa / 2  for y ~ N(mu, sigma^2).
// Throws numeric_error when e^{beta mu} overflows.
double kappa_exp(double mu, double sigma, double beta);

// p_k(x) = [(k-1) + 2(n-k) x / pi] cos(x) / (x^2 (1 - sin x)) and its unique
// interior minimum over (0, pi/2); p_dagger(n) = min over k = 2..n.
// Minimization by golden-section search (tolerance 1e-10 in x); p_dagger is
// cached per n since it does not depend on tau.
double p_k(double x, int k, int n);
double p_k_minimum(int k, int n);
double p_dagger(int n);

// Deterministic scalar root/extremum helpers shared across modules.
double bisect_root(const std::function<double(double)>& g, double lo, double hi);
double golden_section_min(const std::function<double(double)>& g, double lo, double hi,
                          double tol = 1e-10);

}  // namespace netrisk
