#include "netrisk/joint_risk.hpp"

#include <cmath>
#include <numbers>

#include "netrisk/errors.hpp"
#include "netrisk/special_functions.hpp"

namespace netrisk {

SteadyOutput steady_covariance(const Spectrum& s, const ObservableSet& obs, const RiskParams& p) {
  if (obs.n() != s.n()) throw config_error("observable set/spectrum dimension mismatch");
  if (p.tau > 0.0 && !(s.lambda_max() * p.tau < std::numbers::pi / 2.0))
    throw instability_error("steady_covariance: tau >= stability margin");
  if (!kernel_check(obs, s))
    throw numeric_error("steady_covariance: kernel condition fails, steady output unbounded");
  const int q = obs.q();
  SteadyOutput out;
  out.covariance = Matrix(q, q);
  std::vector<std::vector<double>> coeffs;
  coeffs.reserve(q);
  for (const auto& row : obs.rows()) coeffs.push_back(row.coefficients(s));
  for (int k = 2; k <= s.n(); ++k) {
    const double weight = p.b * p.b * steady_energy(s.eigenvalue(k), p.tau);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j)
        out.covariance(i, j) += weight * coeffs[i][k - 1] * coeffs[j][k - 1];
  }
  out.sigmas.resize(q);
  for (int i = 0; i < q; ++i) out.sigmas[i] = std::sqrt(std::max(0.0, out.covariance(i, i)));
  return out;
}

RiskBox probability_risk_bounds(const SteadyOutput& out, double eps,
                                const std::vector<double>& split) {
  if (!(eps > 0.0 && eps < 1.0)) throw config_error("probability bounds: eps in (0,1)");
  const int q = out.q();
  if (static_cast<int>(split.size()) != q)
    throw config_error("probability bounds: split size must equal q");
  double sum = 0.0;
  for (double e : split) {
    if (!(e > 0.0)) throw config_error("probability bounds: split entries must be positive");
    sum += e;
  }
  if (std::fabs(sum - eps) > 1e-9 * eps)
    throw config_error("probability bounds: split must sum to eps");
  RiskBox box;
  box.split = split;
  const double s0 = s_epsilon(eps, 0.0);
  box.lower.resize(q);
  box.upper.resize(q);
  for (int i = 0; i < q; ++i) {
    box.lower[i] = std::numbers::sqrt2 * s0 * out.sigmas[i];
    box.upper[i] = (s_epsilon(split[i], 0.0) / s0) * box.lower[i];
  }
  return box;
}

RiskBox probability_risk_bounds(const SteadyOutput& out, double eps) {
  return probability_risk_bounds(out, eps, std::vector<double>(out.q(), eps / out.q()));
}

std::pair<double, double> scalar_joint_var_bounds(const SteadyOutput& out, double eps) {
  const RiskBox box = probability_risk_bounds(out, eps);
  double lo = 0.0;
  double hi = 0.0;
  for (int i = 0; i < out.q(); ++i) {
    lo = std::max(lo, box.lower[i]);
    hi = std::max(hi, box.upper[i]);
  }
  return {lo, hi};
}

QuadRiskSphere joint_quad_risk(const SteadyOutput& out, double eps) {
  if (!(eps > 0.0)) throw config_error("joint quad risk: eps must be positive");
  QuadRiskSphere sphere;
  const double two_over_pi = 2.0 / std::numbers::pi;
  double sum_var = 0.0;
  sphere.center.resize(out.q());
  for (int i = 0; i < out.q(); ++i) {
    sum_var += out.sigmas[i] * out.sigmas[i];
    sphere.center[i] = std::sqrt(two_over_pi) * out.sigmas[i];
  }
  const double r = eps * eps - (1.0 - two_over_pi) * sum_var;
  sphere.feasible = r > 0.0;
  sphere.radius = sphere.feasible ? std::sqrt(r) : 0.0;
  return sphere;
}

bool quad_sphere_membership(const QuadRiskSphere& sphere, const std::vector<double>& delta,
                            double tol) {
  if (!sphere.feasible || delta.size() != sphere.center.size()) return false;
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    const double z = delta[i] - sphere.center[i];
    if (z > tol) return false;  // members satisfy delta <= center
    norm_sq += z * z;
  }
  return std::fabs(std::sqrt(norm_sq) - sphere.radius) <= tol;
}

RiskValue homogeneous_quad_joint(const SteadyOutput& out, double eps) {
  if (!(eps > 0.0)) throw config_error("homogeneous quad joint: eps must be positive");
  const double two_over_pi = 2.0 / std::numbers::pi;
  double sum_sigma = 0.0, sum_var = 0.0;
  for (double s : out.sigmas) {
    sum_sigma += s;
    sum_var += s * s;
  }
  const double disc = eps * eps - sum_var + two_over_pi * sum_sigma * sum_sigma;
  if (!(disc > 0.0)) return RiskValue::infinite();
  return RiskValue::finite(std::sqrt(two_over_pi) * sum_sigma - std::sqrt(disc));
}

Matrix covariance_sqrt(const Matrix& covariance) {
  std::vector<double> ev;
  Matrix q;
  jacobi_eigendecompose(covariance, ev, q);
  const int n = covariance.rows();
  Matrix out(n, n);
  for (int k = 0; k < n; ++k) {
    double lambda = ev[k];
    if (lambda < -1e-10)
      throw numeric_error("covariance_sqrt: matrix is not PSD (pivot below -1e-10)");
    if (lambda < 0.0) lambda = 0.0;
    const double root = std::sqrt(lambda);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) out(r, c) += root * q(r, k) * q(c, k);
  }
  return out;
}

std::vector<double> mvn_sample(const Matrix& sqrt_factor, CounterRng& rng) {
  const int n = sqrt_factor.rows();
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) z[i] = rng.next_normal();
  return sqrt_factor * z;
}

ExpJointSum exp_joint_sum(const SteadyOutput& out, double eps, double beta, int samples,
                          std::uint64_t seed) {
  if (!(beta > 0.0)) throw config_error("exp_joint_sum: beta must be positive");
  if (samples < 2) throw config_error("exp_joint_sum: needs at least two samples");
  const Matrix factor = covariance_sqrt(out.covariance);
  ExpJointSum result;
  double mean = 0.0, m2 = 0.0;
  long long count = 0;
  CounterRng rng(seed, 0x6a6f696e74ULL);  // fixed stream for this estimator
  for (int i = 0; i < samples; ++i) {
    const auto y = mvn_sample(factor, rng);
    double abs_sum = 0.0;
    for (double v : y) abs_sum += std::fabs(v);
    const double arg = beta * abs_sum;
    if (arg > 700.0) {
      result.overflow = true;
      return result;
    }
    const double w = std::exp(arg);
    ++count;
    const double delta = w - mean;
    mean += delta / count;
    m2 += delta * (w - mean);
  }
  const double variance = m2 / (count - 1);
  const double se_mean = std::sqrt(variance / count);
  result.sum = std::log(mean) / beta - eps;
  result.std_error = se_mean / mean / beta;  // delta method for ln
  return result;
}

McProbability mc_joint_probability(const SteadyOutput& out, const std::vector<double>& delta,
                                   int samples, std::uint64_t seed) {
  if (static_cast<int>(delta.size()) != out.q())
    throw config_error("mc_joint_probability: delta size must equal q");
  if (samples < 1) throw config_error("mc_joint_probability: needs samples >= 1");
  const Matrix factor = covariance_sqrt(out.covariance);
  long long hits = 0;
  CounterRng rng(seed, 0x6d636a70ULL);
  for (int i = 0; i < samples; ++i) {
    const auto y = mvn_sample(factor, rng);
    bool inside = true;
    for (int r = 0; r < out.q(); ++r)
      if (std::fabs(y[r]) > delta[r]) {
        inside = false;
        break;
      }
    if (inside) ++hits;
  }
  McProbability p;
  p.estimate = static_cast<double>(hits) / samples;
  p.std_error = std::sqrt(p.estimate * (1.0 - p.estimate) / samples);
  return p;
}

}  // namespace netrisk
