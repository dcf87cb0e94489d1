#pragma once

#include <cstdint>
#include <vector>

#include "netrisk/graph.hpp"
#include "netrisk/observables.hpp"
#include "netrisk/risk.hpp"
#include "netrisk/rng.hpp"

namespace netrisk {

// Steady-state output law  y_bar ~ N(0, Sigma_bar)  with
//   Sigma_bar = b^2 sum_{k>=2} tau f(lambda_k tau) (C q_k)(C q_k)^T.
struct SteadyOutput {
  Matrix covariance;           // q x q, symmetric PSD
  std::vector<double> sigmas;  // per-row standard deviations (sqrt of diagonal)
  int q() const { return static_cast<int>(sigmas.size()); }
};

// Throws instability_error on unstable tau; throws numeric_error when the
// kernel condition fails (unbounded steady output).
SteadyOutput steady_covariance(const Spectrum& s, const ObservableSet& obs, const RiskParams& p);

// Probability-risk inclusion box of Theorem-4 type: per-coordinate Frechet
// floor sqrt(2) S_eps(0) sigma_i and Bonferroni ceiling scaled by
// S_{eps_i}(0) / S_eps(0) for a split eps_1 + ... + eps_q = eps.
struct RiskBox {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> split;
};

RiskBox probability_risk_bounds(const SteadyOutput& out, double eps,
                                const std::vector<double>& split);
RiskBox probability_risk_bounds(const SteadyOutput& out, double eps);  // equal split

// Scalar joint VaR bracketing for homogeneous events:
//   lo = max_i R_eps(|y_i|),  hi = Bonferroni bound under the equal split
//   (= S_{eps/q}(0)/S_eps(0) * lo), so lo <= hi always.
std::pair<double, double> scalar_joint_var_bounds(const SteadyOutput& out, double eps);

// Quadratic joint risk set: sphere slice {center + z | z <= 0, |z| = radius}.
struct QuadRiskSphere {
  bool feasible = false;
  std::vector<double> center;  // sqrt(2/pi) sigma_i
  double radius = 0.0;         // sqrt(eps^2 - (1 - 2/pi) sum sigma_i^2), when feasible
};

QuadRiskSphere joint_quad_risk(const SteadyOutput& out, double eps);
bool quad_sphere_membership(const QuadRiskSphere& sphere, const std::vector<double>& delta,
                            double tol = 1e-8);

// Homogeneous scalar quadratic joint risk (single margin for all rows).
RiskValue homogeneous_quad_joint(const SteadyOutput& out, double eps);

// Monte Carlo estimate of sum_i delta_i for the exponential vector risk:
//   (1/beta) ln E[e^{beta sum_i |y_i|}] - eps.
struct ExpJointSum {
  bool overflow = false;
  double sum = 0.0;
  double std_error = 0.0;  // of the log estimate, divided by beta
};
ExpJointSum exp_joint_sum(const SteadyOutput& out, double eps, double beta, int samples,
                          std::uint64_t seed);

// P(|y| <= delta componentwise) under N(0, Sigma_bar), with the symmetric
// square root factor built from a Jacobi decomposition of Sigma_bar
// (eigenvalues in [-1e-10, 0) clamped to zero; smaller pivots reject).
struct McProbability {
  double estimate = 0.0;
  double std_error = 0.0;
};
McProbability mc_joint_probability(const SteadyOutput& out, const std::vector<double>& delta,
                                   int samples, std::uint64_t seed);

// Samples from N(0, Sigma) via the spectral square root; exposed for oracles.
Matrix covariance_sqrt(const Matrix& covariance);
std::vector<double> mvn_sample(const Matrix& sqrt_factor, CounterRng& rng);

}  // namespace netrisk
