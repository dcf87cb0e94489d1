#pragma once

#include <cstdint>
#include <vector>

#include "netrisk/graph.hpp"
#include "netrisk/joint_risk.hpp"
#include "netrisk/observables.hpp"
#include "netrisk/risk.hpp"

namespace netrisk {

// Stability-induced floor on the total effective resistance: 2 n (n-1) tau / pi.
double resistance_floor(int n, double tau);

// Hard limits caused by the delay alone (graph-independent):
//   kappa_star = |c| b S_eps(0) / sqrt(1 - sin z+)   and   R >= kappa_star sqrt(tau)
//   sigma_star = b |c| sqrt(tau / (2 (1 - sin z+)))
double var_hard_limit(const Observable& c, const RiskParams& p);
double sigma_star(const Observable& c, const RiskParams& p);
double sigma_star_from_norm(double c_norm, double b, double tau);

// Plugs sigma_star into the steady quadratic/exponential risk formulas.
RiskValue quad_hard_limit(const Observable& c, const RiskParams& p);
RiskValue exp_hard_limit(const Observable& c, const RiskParams& p);

// Risk-connectivity tradeoff floors. The multiplicative chain behind the
// theorem gives sigma^2 Xi > |c|^2 (n b^2 tau^2 / 2) p_dagger(n); the floors
// below carry the resulting tau * sqrt(n) scaling.
//   var floor:      R_eps sqrt(Xi) > theta_star tau sqrt(n),
//                    theta_star = |c| b S_eps(0) sqrt(p_dagger)
//   rho_star = |c| |b| tau sqrt(n p_dagger / 2)
double var_tradeoff_floor(const Observable& c, const RiskParams& p, int n);
double rho_star(const Observable& c, const RiskParams& p, int n);
double quad_tradeoff_delta(const Observable& c, const RiskParams& p, int n);
double exp_tradeoff_delta(const Observable& c, const RiskParams& p, int n);

// Vector forms: componentwise tradeoff floor Theta_star tau sqrt(n) and the
// joint-expectation hard-limit floors (quadratic vector floor, exponential
// floor on the coordinate sum).
std::vector<double> vector_tradeoff_floor(const ObservableSet& obs, const RiskParams& p, int n);
std::vector<double> vector_quad_hard_limit(const ObservableSet& obs, const RiskParams& p);
double vector_exp_sum_floor(const ObservableSet& obs, const RiskParams& p);

// Every Section-8-style inequality evaluated on one concrete instance.
struct LimitReport {
  double resistance = 0.0;
  double resistance_floor = 0.0;
  bool resistance_ok = false;

  double var_risk = 0.0;
  double var_hard_limit = 0.0;
  bool var_hard_ok = false;
  double sigma_star = 0.0;

  RiskValue quad_risk = RiskValue::finite(0.0);
  RiskValue quad_hard_limit = RiskValue::finite(0.0);
  bool quad_hard_ok = false;
  RiskValue exp_risk = RiskValue::finite(0.0);
  RiskValue exp_hard_limit = RiskValue::finite(0.0);
  bool exp_hard_ok = false;

  double var_tradeoff_product = 0.0;  // R_eps * sqrt(Xi)
  double var_tradeoff_floor = 0.0;
  bool var_tradeoff_ok = false;
  double quad_tradeoff_product = 0.0;  // (T_eps + eps) * sqrt(Xi), +inf when T infinite
  double quad_tradeoff_delta = 0.0;
  bool quad_tradeoff_ok = false;
  double exp_tradeoff_product = 0.0;
  double exp_tradeoff_delta = 0.0;
  bool exp_tradeoff_ok = false;

  bool all_ok = false;
};

LimitReport evaluate_limits(const Spectrum& s, const Observable& c, const RiskParams& p);

// Scatter data behind the tradeoff figure: random connected stable graphs,
// random centered unit observables, pairs scaled by 1/(sqrt(2) S_eps(0)).
struct ScatterPoint {
  double sqrt_resistance = 0.0;  // scaled
  double risk = 0.0;             // scaled
  bool passes_hard = false;
  bool passes_tradeoff = false;
};

struct ScatterResult {
  std::vector<ScatterPoint> points;
  double hard_limit_scaled = 0.0;        // kappa_star sqrt(tau) / (sqrt2 S_eps(0)) for |c| = 1
  double resistance_floor_scaled = 0.0;  // sqrt(2 n (n-1) tau / pi) / (sqrt2 S_eps(0))
  double tradeoff_coeff_scaled = 0.0;    // theta_star tau sqrt(n) / (2 S_eps(0)^2), hyperbola coeff
  int violations = 0;
};

ScatterResult tradeoff_scatter(int n, int count, double tau, double eps, std::uint64_t seed);

// The complete-graph family with uniform coupling w: as w sweeps, traces the
// curve that meets the hard limit at lambda tau = z+.
struct FamilyPoint {
  double weight = 0.0;
  double sqrt_resistance = 0.0;  // scaled as in ScatterResult
  double risk = 0.0;
};
std::vector<FamilyPoint> complete_family_curve(int n, double tau, double eps, int points);

}  // namespace netrisk
