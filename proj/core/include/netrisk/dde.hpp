#pragma once

#include <vector>

#include "netrisk/graph.hpp"
#include "netrisk/matrix.hpp"
#include "netrisk/observables.hpp"

namespace netrisk {

// Fundamental solution of  phi'(t) = -lambda phi(t - tau)  with phi = 0 on
// [-tau, 0) and phi(0) = 1, integrated by 4th-order Runge-Kutta method of
// steps on a uniform grid aligned to the delay (the RHS depends only on the
// delayed value, so each step is a Simpson update with a cubic Hermite
// midpoint). Immutable once constructed.
class ModeSolution {
 public:
  // `step` is a requested upper bound; the actual step is tau/m with integer
  // m >= 64 so delay breakpoints land on grid points. Requires lambda > 0 and
  // lambda * tau < pi/2.
  ModeSolution(double lambda, double tau, double horizon, double step);

  double lambda() const { return lambda_; }
  double tau() const { return tau_; }
  double horizon() const { return horizon_; }
  double step() const { return h_; }

  // phi(t); zero for t < 0, cubic Hermite between grid points. Throws
  // numeric_error past the computed horizon (callers extend by recomputing).
  double value(double t) const;

  const std::vector<double>& grid_values() const { return values_; }

 private:
  double value_in_cell(int cell, double xi) const;
  double lambda_, tau_, h_, horizon_;
  int steps_per_delay_;
  std::vector<double> values_;
  std::vector<double> deriv_right_;  // right derivative at each grid point
  std::vector<double> deriv_left_;   // left derivative (differs only at t = tau)
};

// Fundamental solution integrated until |phi| < 1e-8 across one full delay
// window, capped at 200/lambda. `slow_decay` reports hitting the cap.
ModeSolution fundamental_decayed(double lambda, double tau, bool* slow_decay = nullptr);

// Adaptive-Simpson quadrature of phi^2 over [0, T] (absolute tolerance 1e-9).
double energy_integral(double lambda, double tau, double t_end);
double energy_integral(const ModeSolution& phi, double t_end);

// Closed form of the full energy: integral_0^inf phi^2 = tau * f(lambda tau).
double steady_energy(double lambda, double tau);

// V(rho) = integral_rho^inf phi(t) phi(t - rho) dt, by quadrature on the
// decayed solution. Verification oracle for the energy identity machinery.
double autocorrelation_v(double lambda, double tau, double rho);

// Node history segment on [-tau, 0], sampled on a uniform grid with an odd
// number of points (so Simpson applies directly). Linear interpolation
// between samples; constants are represented exactly.
class HistoryFunction {
 public:
  HistoryFunction(double tau, Matrix samples);  // samples: n rows, odd #cols
  static HistoryFunction constant(const std::vector<double>& x0, double tau, int points = 65);

  double tau() const { return tau_; }
  int n() const { return samples_.rows(); }
  int points() const { return samples_.cols(); }
  double sample(int node, int j) const { return samples_(node, j); }  // 0-based node
  double value(int node, double t) const;                             // t in [-tau, 0]
  std::vector<double> at(double t) const;

 private:
  double tau_;
  Matrix samples_;
};

// Transient output statistics for y = c^T x under deterministic history.
//   mu_t    = sum_k c^Q_k [ phi_k(t) h^Q_k(0) - lambda_k I_k(t) ],
//             I_k(t) = integral_{-tau}^0 phi_k(t - tau - s) h^Q_k(s) ds
//   sigma_t^2 = b^2 [ (c^Q_1)^2 t + sum_{k>=2} (c^Q_k)^2 energy_k(t) ]
// The lambda_1 = 0 mode is special-cased (phi == 1, energy = t).
std::vector<double> transient_mean(const Spectrum& s, const Observable& c,
                                   const HistoryFunction& h, const std::vector<double>& ts);
double transient_mean(const Spectrum& s, const Observable& c, const HistoryFunction& h, double t);

std::vector<double> transient_variance(const Spectrum& s, const Observable& c, double tau,
                                       double b, const std::vector<double>& ts);
double transient_variance(const Spectrum& s, const Observable& c, double tau, double b, double t);

}  // namespace netrisk
