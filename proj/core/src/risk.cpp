#include "netrisk/risk.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "netrisk/errors.hpp"
#include "netrisk/special_functions.hpp"

namespace netrisk {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_stability(const Spectrum& s, double tau) {
  if (tau < 0.0) throw config_error("tau must be nonnegative");
  if (tau > 0.0 && !(s.lambda_max() * tau < kHalfPi))
    throw instability_error("tau >= stability margin pi/(2 lambda_n)");
}

void check_eps_probability(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw config_error("eps must be in (0, 1) for VaR");
}

void check_eps_utility(double eps) {
  if (!(eps > 0.0)) throw config_error("eps must be positive for expectation risk");
}

}  // namespace

double RiskParams::beta_or_throw() const {
  if (!beta || !(*beta > 0.0)) throw config_error("beta must be set and positive");
  return *beta;
}

double RiskValue::value() const {
  if (infinite_) throw std::logic_error("RiskValue: Infinite has no finite value");
  return value_;
}

double RiskValue::value_or_inf() const { return infinite_ ? kInf : value_; }

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Safe:
      return "safe";
    case Classification::Marginal:
      return "marginal";
    case Classification::Unsafe:
      return "unsafe";
  }
  return "?";
}

double steady_sigma(const Spectrum& s, const Observable& c, const RiskParams& p) {
  check_stability(s, p.tau);
  const auto cq = c.coefficients(s);
  if (std::fabs(cq[0]) >= 1e-10) return kInf;  // kernel violated: unbounded variance
  double var = 0.0;
  for (int k = 2; k <= s.n(); ++k) {
    const double w = cq[k - 1] * cq[k - 1];
    if (w > 0.0) var += w * steady_energy(s.eigenvalue(k), p.tau);
  }
  return std::fabs(p.b) * std::sqrt(var);
}

namespace {

Matrix matrix_cos(const Matrix& x) {
  const int n = x.rows();
  Matrix acc = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  const Matrix x2 = x * x;
  for (int k = 1; k <= 24; ++k) {
    term = term * x2;
    const double coef = 1.0 / (2.0 * k * (2.0 * k - 1.0));
    Matrix scaled(n, n);
    for (int r = 0; r < n; ++r)
      for (int col = 0; col < n; ++col) scaled(r, col) = -coef * term(r, col);
    term = scaled;
    for (int r = 0; r < n; ++r)
      for (int col = 0; col < n; ++col) acc(r, col) += term(r, col);
  }
  return acc;
}

Matrix matrix_sin(const Matrix& x) {
  const int n = x.rows();
  Matrix acc = x;
  Matrix term = x;
  const Matrix x2 = x * x;
  for (int k = 1; k <= 24; ++k) {
    term = term * x2;
    const double coef = 1.0 / (2.0 * k * (2.0 * k + 1.0));
    Matrix scaled(n, n);
    for (int r = 0; r < n; ++r)
      for (int col = 0; col < n; ++col) scaled(r, col) = -coef * term(r, col);
    term = scaled;
    for (int r = 0; r < n; ++r)
      for (int col = 0; col < n; ++col) acc(r, col) += term(r, col);
  }
  return acc;
}

Matrix pseudo_inverse_sym(const Matrix& a, double rel_tol = 1e-10) {
  std::vector<double> ev;
  Matrix q;
  jacobi_eigendecompose(a, ev, q);
  double scale = 0.0;
  for (double v : ev) scale = std::max(scale, std::fabs(v));
  const int n = a.rows();
  Matrix out(n, n);
  for (int k = 0; k < n; ++k) {
    if (std::fabs(ev[k]) <= rel_tol * std::max(1.0, scale)) continue;
    const double inv = 1.0 / ev[k];
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) out(r, c) += inv * q(r, k) * q(c, k);
  }
  return out;
}

}  // namespace

double steady_sigma_trace(const Matrix& laplacian, const Observable& c, const RiskParams& p) {
  const int n = laplacian.rows();
  if (c.n() != n) throw config_error("observable/laplacian dimension mismatch");
  {
    const Spectrum s = Spectrum::compute(laplacian);
    check_stability(s, p.tau);
  }
  Matrix tl(n, n);
  for (int r = 0; r < n; ++r)
    for (int col = 0; col < n; ++col) tl(r, col) = p.tau * laplacian(r, col);
  const Matrix lp = pseudo_inverse_sym(laplacian);
  const Matrix cosm = matrix_cos(tl);
  Matrix centered = centering_matrix(n);
  const Matrix sinm = matrix_sin(tl);
  for (int r = 0; r < n; ++r)
    for (int col = 0; col < n; ++col) centered(r, col) -= sinm(r, col);
  const Matrix pinv = pseudo_inverse_sym(centered);
  const Matrix x = lp * cosm * pinv;
  const auto xc = x * c.vec();
  const double quad = dot(c.vec(), xc);
  return 0.5 * p.b * p.b * quad;
}

RiskValue var_risk_transient(const Spectrum& s, const Observable& c, const HistoryFunction& h,
                             const RiskParams& p, double t) {
  check_eps_probability(p.eps);
  const double mu = transient_mean(s, c, h, t);
  const double sigma = std::sqrt(transient_variance(s, c, p.tau, p.b, t));
  const double amu = std::fabs(mu);
  if (sigma == 0.0) return RiskValue::finite(amu);  // degenerate case: P(|y| > delta) jumps at |mu|
  const double alpha = amu / (std::numbers::sqrt2 * sigma);
  return RiskValue::finite(std::numbers::sqrt2 * sigma * s_epsilon(p.eps, alpha) + amu);
}

RiskValue var_risk_steady(const Spectrum& s, const Observable& c, const RiskParams& p) {
  check_eps_probability(p.eps);
  const double sigma = steady_sigma(s, c, p);
  if (std::isinf(sigma)) return RiskValue::infinite();
  return RiskValue::finite(std::numbers::sqrt2 * s_epsilon(p.eps, 0.0) * sigma);
}

RiskValue quad_risk_from_moments(double mean_folded, double var_folded, double eps) {
  check_eps_utility(eps);
  const double disc = eps * eps - var_folded;
  if (disc < 0.0) return RiskValue::infinite();
  return RiskValue::finite(mean_folded - std::sqrt(disc));
}

RiskValue quad_risk_transient(const Spectrum& s, const Observable& c, const HistoryFunction& h,
                              const RiskParams& p, double t) {
  const double mu = transient_mean(s, c, h, t);
  const double sigma = std::sqrt(transient_variance(s, c, p.tau, p.b, t));
  const FoldedMoments fm = folded_moments(mu, sigma);
  return quad_risk_from_moments(fm.mean, fm.variance, p.eps);
}

RiskValue quad_risk_steady_from_sigma(double sigma_bar, double eps) {
  check_eps_utility(eps);
  if (std::isinf(sigma_bar)) return RiskValue::infinite();
  const double two_over_pi = 2.0 / std::numbers::pi;
  const double disc = eps * eps - (1.0 - two_over_pi) * sigma_bar * sigma_bar;
  if (disc < 0.0) return RiskValue::infinite();
  return RiskValue::finite(std::sqrt(two_over_pi) * sigma_bar - std::sqrt(disc));
}

RiskValue quad_risk_steady(const Spectrum& s, const Observable& c, const RiskParams& p) {
  return quad_risk_steady_from_sigma(steady_sigma(s, c, p), p.eps);
}

RiskValue exp_risk_from_moments(double mu, double sigma, double eps, double beta) {
  check_eps_utility(eps);
  if (!(beta > 0.0)) throw config_error("beta must be positive");
  if (sigma == 0.0) return RiskValue::finite(std::fabs(mu) - eps);
  try {
    const double kappa = kappa_exp(mu, sigma, beta);
    return RiskValue::finite(0.5 * beta * sigma * sigma + std::log(0.5 * kappa) / beta - eps);
  } catch (const numeric_error&) {
    return RiskValue::infinite();  // exp overflow: report Unsafe rather than failing
  }
}

RiskValue exp_risk_transient(const Spectrum& s, const Observable& c, const HistoryFunction& h,
                             const RiskParams& p, double t) {
  const double mu = transient_mean(s, c, h, t);
  const double sigma = std::sqrt(transient_variance(s, c, p.tau, p.b, t));
  return exp_risk_from_moments(mu, sigma, p.eps, p.beta_or_throw());
}

RiskValue exp_risk_steady_from_sigma(double sigma_bar, double eps, double beta) {
  if (std::isinf(sigma_bar)) return RiskValue::infinite();
  return exp_risk_from_moments(0.0, sigma_bar, eps, beta);
}

RiskValue exp_risk_steady(const Spectrum& s, const Observable& c, const RiskParams& p) {
  return exp_risk_steady_from_sigma(steady_sigma(s, c, p), p.eps, p.beta_or_throw());
}

double exp_risk_steady_printed_variant(double sigma_bar, double eps, double beta) {
  return 0.5 * beta * sigma_bar * sigma_bar +
         std::log1p(erf(0.5 * beta * sigma_bar)) / beta - eps;
}

double steady_variance_delay_derivative(const Spectrum& s, const Observable& c,
                                        const RiskParams& p) {
  check_stability(s, p.tau);
  const auto cq = c.coefficients(s);
  double acc = 0.0;
  for (int k = 2; k <= s.n(); ++k)
    acc += cq[k - 1] * cq[k - 1] / (1.0 - std::sin(s.eigenvalue(k) * p.tau));
  return 0.5 * p.b * p.b * acc;
}

MonotonicityReport delay_monotonicity_report(const Spectrum& s, const Observable& c,
                                             const RiskParams& p,
                                             const std::vector<double>& tau_grid) {
  MonotonicityReport report;
  if (tau_grid.empty()) throw config_error("tau grid must be nonempty");
  for (double tau : tau_grid) check_stability(s, tau);

  auto sigma_sq_at = [&](double tau) {
    RiskParams q = p;
    q.tau = tau;
    const double sig = steady_sigma(s, c, q);
    return sig * sig;
  };

  const double beta = p.beta ? *p.beta : 1.0;
  for (double tau : tau_grid) {
    RiskParams q = p;
    q.tau = tau;
    MonotonicityRow row;
    row.tau = tau;
    const double sigma = steady_sigma(s, c, q);
    row.var_risk = std::numbers::sqrt2 * s_epsilon(p.eps, 0.0) * sigma;
    row.quad_risk = quad_risk_steady_from_sigma(sigma, p.eps);
    row.exp_risk = exp_risk_steady_from_sigma(sigma, p.eps, beta);
    row.dvar_dtau_analytic = steady_variance_delay_derivative(s, c, q);
    const double h = 1e-4 * tau;
    row.dvar_dtau_fd = (sigma_sq_at(tau + h) - sigma_sq_at(tau - h)) / (2.0 * h);
    const double rel = std::fabs(row.dvar_dtau_fd - row.dvar_dtau_analytic) /
                       std::max(1e-300, std::fabs(row.dvar_dtau_analytic));
    report.max_derivative_rel_err = std::max(report.max_derivative_rel_err, rel);
    report.rows.push_back(row);
  }

  auto strictly_increases = [](double a, double b) { return b > a; };
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& prev = report.rows[i - 1];
    const auto& cur = report.rows[i];
    if (!strictly_increases(prev.var_risk, cur.var_risk)) report.strictly_increasing = false;
    // Infinite is the top element: finite -> infinite increases; infinite may
    // not return to finite and infinite -> infinite carries no strict order.
    if (prev.quad_risk.is_infinite() && !cur.quad_risk.is_infinite())
      report.strictly_increasing = false;
    if (!prev.quad_risk.is_infinite() && !cur.quad_risk.is_infinite() &&
        !strictly_increases(prev.quad_risk.value(), cur.quad_risk.value()))
      report.strictly_increasing = false;
    if (!prev.exp_risk.is_infinite() && !cur.exp_risk.is_infinite() &&
        !strictly_increases(prev.exp_risk.value(), cur.exp_risk.value()))
      report.strictly_increasing = false;
  }
  return report;
}

}  // namespace netrisk
