#include "netrisk/limits.hpp"

#include <cmath>
#include <numbers>

#include "netrisk/errors.hpp"
#include "netrisk/special_functions.hpp"

namespace netrisk {

namespace {
double one_minus_sin_zplus() {
  static const double v = 1.0 - std::sin(z_plus());
  return v;
}
}  // namespace

double resistance_floor(int n, double tau) {
  return 2.0 * n * (n - 1.0) * tau / std::numbers::pi;
}

double var_hard_limit(const Observable& c, const RiskParams& p) {
  return c.norm() * std::fabs(p.b) * s_epsilon(p.eps, 0.0) / std::sqrt(one_minus_sin_zplus()) *
         std::sqrt(p.tau);
}

double sigma_star_from_norm(double c_norm, double b, double tau) {
  return std::fabs(b) * c_norm * std::sqrt(tau / (2.0 * one_minus_sin_zplus()));
}

double sigma_star(const Observable& c, const RiskParams& p) {
  return sigma_star_from_norm(c.norm(), p.b, p.tau);
}

RiskValue quad_hard_limit(const Observable& c, const RiskParams& p) {
  return quad_risk_steady_from_sigma(sigma_star(c, p), p.eps);
}

RiskValue exp_hard_limit(const Observable& c, const RiskParams& p) {
  return exp_risk_steady_from_sigma(sigma_star(c, p), p.eps, p.beta_or_throw());
}

double var_tradeoff_floor(const Observable& c, const RiskParams& p, int n) {
  if (n < 2) throw config_error("tradeoff floor: n >= 2");
  return c.norm() * std::fabs(p.b) * s_epsilon(p.eps, 0.0) * std::sqrt(p_dagger(n)) * p.tau *
         std::sqrt(static_cast<double>(n));
}

double rho_star(const Observable& c, const RiskParams& p, int n) {
  return c.norm() * std::fabs(p.b) * p.tau * std::sqrt(0.5 * n * p_dagger(n));
}

double quad_tradeoff_delta(const Observable& c, const RiskParams& p, int n) {
  const double two_over_pi = 2.0 / std::numbers::pi;
  const double sstar = sigma_star(c, p);
  return (std::sqrt(two_over_pi) + (1.0 - two_over_pi) * sstar / (2.0 * p.eps)) *
         rho_star(c, p, n);
}

double exp_tradeoff_delta(const Observable& c, const RiskParams& p, int n) {
  const double beta = p.beta_or_throw();
  const double sstar = sigma_star(c, p);
  // second term uses the sqrt(Xi) floor sqrt(2 n (n-1) tau / pi)
  return 0.5 * beta * sstar * rho_star(c, p, n) +
         erf(beta * sstar / std::numbers::sqrt2) / (2.0 * beta) *
             std::sqrt(resistance_floor(n, p.tau));
}

std::vector<double> vector_tradeoff_floor(const ObservableSet& obs, const RiskParams& p, int n) {
  std::vector<double> out;
  out.reserve(obs.q());
  for (const auto& row : obs.rows()) out.push_back(var_tradeoff_floor(row, p, n));
  return out;
}

std::vector<double> vector_quad_hard_limit(const ObservableSet& obs, const RiskParams& p) {
  const double two_over_pi = 2.0 / std::numbers::pi;
  std::vector<double> sstars;
  double norm_sq = 0.0;
  for (const auto& row : obs.rows()) {
    const double s = sigma_star(row, p);
    sstars.push_back(s);
    norm_sq += s * s;
  }
  const double disc = p.eps * p.eps - (1.0 - two_over_pi) * norm_sq;
  const double sub = disc > 0.0 ? std::sqrt(disc) : 0.0;
  std::vector<double> out;
  out.reserve(sstars.size());
  for (double s : sstars) out.push_back(std::sqrt(two_over_pi) * s - sub);
  return out;
}

double vector_exp_sum_floor(const ObservableSet& obs, const RiskParams& p) {
  double norm_sum = 0.0;
  for (const auto& row : obs.rows()) norm_sum += row.norm();
  return std::fabs(p.b) * std::sqrt(p.tau / (std::numbers::pi * one_minus_sin_zplus())) *
             norm_sum -
         p.eps;
}

LimitReport evaluate_limits(const Spectrum& s, const Observable& c, const RiskParams& p) {
  LimitReport r;
  const int n = s.n();
  r.resistance = total_effective_resistance(s);
  r.resistance_floor = resistance_floor(n, p.tau);
  r.resistance_ok = r.resistance > r.resistance_floor;

  const RiskValue var = var_risk_steady(s, c, p);
  r.var_risk = var.value_or_inf();
  r.var_hard_limit = var_hard_limit(c, p);
  r.var_hard_ok = r.var_risk >= r.var_hard_limit * (1.0 - 1e-12);
  r.sigma_star = sigma_star(c, p);

  r.quad_risk = quad_risk_steady(s, c, p);
  r.quad_hard_limit = quad_hard_limit(c, p);
  r.quad_hard_ok = r.quad_risk.value_or_inf() >=
                   r.quad_hard_limit.value_or_inf() * (1.0 - 1e-12) - 1e-12;
  if (p.beta) {
    r.exp_risk = exp_risk_steady(s, c, p);
    r.exp_hard_limit = exp_hard_limit(c, p);
    r.exp_hard_ok =
        r.exp_risk.value_or_inf() >= r.exp_hard_limit.value_or_inf() * (1.0 - 1e-12) - 1e-12;
  } else {
    r.exp_hard_ok = true;
  }

  const double sqrt_xi = std::sqrt(r.resistance);
  r.var_tradeoff_product = r.var_risk * sqrt_xi;
  r.var_tradeoff_floor = var_tradeoff_floor(c, p, n);
  r.var_tradeoff_ok = r.var_tradeoff_product > r.var_tradeoff_floor;

  r.quad_tradeoff_product = (r.quad_risk.value_or_inf() + p.eps) * sqrt_xi;
  r.quad_tradeoff_delta = quad_tradeoff_delta(c, p, n);
  r.quad_tradeoff_ok = r.quad_tradeoff_product > r.quad_tradeoff_delta;
  if (p.beta) {
    r.exp_tradeoff_product = (r.exp_risk.value_or_inf() + p.eps) * sqrt_xi;
    r.exp_tradeoff_delta = exp_tradeoff_delta(c, p, n);
    r.exp_tradeoff_ok = r.exp_tradeoff_product > r.exp_tradeoff_delta;
  } else {
    r.exp_tradeoff_ok = true;
  }

  r.all_ok = r.resistance_ok && r.var_hard_ok && r.quad_hard_ok && r.exp_hard_ok &&
             r.var_tradeoff_ok && r.quad_tradeoff_ok && r.exp_tradeoff_ok;
  return r;
}

ScatterResult tradeoff_scatter(int n, int count, double tau, double eps, std::uint64_t seed) {
  if (count < 1) throw config_error("scatter: count >= 1");
  ScatterResult result;
  const double s0 = s_epsilon(eps, 0.0);
  const double scale = 1.0 / (std::numbers::sqrt2 * s0);
  RiskParams p;
  p.eps = eps;
  p.b = 1.0;
  p.tau = tau;

  result.hard_limit_scaled = (s0 / std::sqrt(one_minus_sin_zplus())) * std::sqrt(tau) * scale;
  result.resistance_floor_scaled = std::sqrt(resistance_floor(n, tau)) * scale;
  result.tradeoff_coeff_scaled =
      s0 * std::sqrt(p_dagger(n)) * tau * std::sqrt(static_cast<double>(n)) * scale * scale;

  result.points.reserve(count);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t graph_seed = CounterRng::mix(seed + 1000003ULL * i);
    const WeightedGraph g = random_connected_graph(n, 0.5, 0.5, 1.5, tau, graph_seed);
    const Spectrum spec = Spectrum::compute(g.laplacian());

    // Random unit observable in the ones-orthogonal subspace.
    CounterRng rng(seed, 0x73636174ULL, i);
    std::vector<double> c(n);
    double mean = 0.0;
    for (int r = 0; r < n; ++r) {
      c[r] = rng.next_normal();
      mean += c[r];
    }
    mean /= n;
    for (int r = 0; r < n; ++r) c[r] -= mean;
    const double norm = norm2(c);
    for (int r = 0; r < n; ++r) c[r] /= norm;
    const Observable obs = Observable::custom(c);

    ScatterPoint pt;
    const double xi = total_effective_resistance(spec);
    const double risk = var_risk_steady(spec, obs, p).value();
    pt.sqrt_resistance = std::sqrt(xi) * scale;
    pt.risk = risk * scale;
    pt.passes_hard = risk >= var_hard_limit(obs, p) * (1.0 - 1e-12) &&
                     xi > resistance_floor(n, tau);
    pt.passes_tradeoff = risk * std::sqrt(xi) > var_tradeoff_floor(obs, p, n);
    if (!pt.passes_hard || !pt.passes_tradeoff) ++result.violations;
    result.points.push_back(pt);
  }
  return result;
}

std::vector<FamilyPoint> complete_family_curve(int n, double tau, double eps, int points) {
  if (points < 2) throw config_error("family curve: points >= 2");
  std::vector<FamilyPoint> out;
  out.reserve(points);
  const double s0 = s_epsilon(eps, 0.0);
  const double scale = 1.0 / (std::numbers::sqrt2 * s0);
  // Sweep lambda tau over the stable interval; weight w = lambda / n.
  const double lo = 0.05, hi = 0.98 * std::numbers::pi / 2.0;
  for (int i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1.0);
    const double lambda = x / tau;
    FamilyPoint fp;
    fp.weight = lambda / n;
    const double xi = n * (n - 1.0) / lambda;
    // unit-norm centered observable: sigma^2 = tau f(x)
    const double sigma = std::sqrt(tau * f_energy(x));
    fp.sqrt_resistance = std::sqrt(xi) * scale;
    fp.risk = std::numbers::sqrt2 * s0 * sigma * scale;
    out.push_back(fp);
  }
  return out;
}

}  // namespace netrisk
