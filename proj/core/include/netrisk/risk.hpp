#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netrisk/dde.hpp"
#include "netrisk/graph.hpp"
#include "netrisk/observables.hpp"

namespace netrisk {

struct RiskParams {
  double eps = 0.05;   // probability threshold in (0,1) for VaR; utility threshold for T_eps
  double b = 1.0;      // diffusion coefficient
  double tau = 0.0;    // delay; must stay strictly below the spectrum's stability margin
  std::optional<double> beta;  // exponential-utility rate (> 0 when used)

  double beta_or_throw() const;
};

enum class Classification { Safe, Marginal, Unsafe };

// Finite(x) or Infinite, with the classification derived (never stored):
// Safe = finite negative, Marginal = finite nonnegative, Unsafe = infinite.
class RiskValue {
 public:
  static RiskValue finite(double v) { return RiskValue(v, false); }
  static RiskValue infinite() { return RiskValue(0.0, true); }

  bool is_infinite() const { return infinite_; }
  double value() const;  // throws when infinite
  double value_or_inf() const;
  Classification classification() const {
    if (infinite_) return Classification::Unsafe;
    return value_ < 0.0 ? Classification::Safe : Classification::Marginal;
  }

 private:
  RiskValue(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

std::string to_string(Classification c);

// Steady standard deviation of y = c^T x:
//   sigma_bar^2 = b^2 sum_{k>=2} (c^Q_k)^2 tau f(lambda_k tau)
// Returns +infinity when the kernel condition fails (|c^Q_1| >= 1e-10);
// throws instability_error when lambda_n tau >= pi/2. tau == 0 uses the
// Ornstein-Uhlenbeck limit 1/(2 lambda_k).
double steady_sigma(const Spectrum& s, const Observable& c, const RiskParams& p);

// Same quantity through the trace form
//   (b^2/2) Tr[ c c^T L^+ cos(tau L) (M_n - sin(tau L))^+ ]
// with the matrix cosine/sine computed by their Taylor series and the
// pseudo-inverses by fresh Jacobi decompositions. Cross-check route.
double steady_sigma_trace(const Matrix& laplacian, const Observable& c, const RiskParams& p);

// Value-at-risk of |y_t| (transient) and |y_bar| (steady):
//   transient: sqrt(2) sigma_t S_eps(|mu_t| / (sqrt(2) sigma_t)) + |mu_t|
//   steady:    sqrt(2) S_eps(0) sigma_bar,  Infinite when the kernel fails.
RiskValue var_risk_transient(const Spectrum& s, const Observable& c, const HistoryFunction& h,
                             const RiskParams& p, double t);
RiskValue var_risk_steady(const Spectrum& s, const Observable& c, const RiskParams& p);

// Quadratic-utility risk in expectation.
RiskValue quad_risk_transient(const Spectrum& s, const Observable& c, const HistoryFunction& h,
                              const RiskParams& p, double t);
RiskValue quad_risk_steady(const Spectrum& s, const Observable& c, const RiskParams& p);
RiskValue quad_risk_from_moments(double mean_folded, double var_folded, double eps);
RiskValue quad_risk_steady_from_sigma(double sigma_bar, double eps);

// Exponential-utility risk in expectation. The steady form uses the
// sqrt(2) erf argument consistent with the transient kappa limit;
// exp_risk_steady_printed_variant evaluates the /2 variant for comparison.
RiskValue exp_risk_transient(const Spectrum& s, const Observable& c, const HistoryFunction& h,
                             const RiskParams& p, double t);
RiskValue exp_risk_steady(const Spectrum& s, const Observable& c, const RiskParams& p);
RiskValue exp_risk_from_moments(double mu, double sigma, double eps, double beta);
RiskValue exp_risk_steady_from_sigma(double sigma_bar, double eps, double beta);
double exp_risk_steady_printed_variant(double sigma_bar, double eps, double beta);

// d sigma_bar^2 / d tau = (b^2/2) sum_{k>=2} (c^Q_k)^2 / (1 - sin(lambda_k tau))
double steady_variance_delay_derivative(const Spectrum& s, const Observable& c,
                                        const RiskParams& p);

struct MonotonicityRow {
  double tau = 0.0;
  double var_risk = 0.0;
  RiskValue quad_risk = RiskValue::finite(0.0);
  RiskValue exp_risk = RiskValue::finite(0.0);
  double dvar_dtau_analytic = 0.0;
  double dvar_dtau_fd = 0.0;
};

struct MonotonicityReport {
  std::vector<MonotonicityRow> rows;
  bool strictly_increasing = true;   // all three measures along the grid
  double max_derivative_rel_err = 0.0;
};

// Evaluates all three steady risks along tau_grid (every point must be
// stable), asserts strict increase, and compares the analytic derivative of
// sigma_bar^2 against central finite differences.
MonotonicityReport delay_monotonicity_report(const Spectrum& s, const Observable& c,
                                             const RiskParams& p,
                                             const std::vector<double>& tau_grid);

}  // namespace netrisk
