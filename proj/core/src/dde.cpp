#include "netrisk/dde.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "netrisk/errors.hpp"
#include "netrisk/special_functions.hpp"

namespace netrisk {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
}

ModeSolution::ModeSolution(double lambda, double tau, double horizon, double step)
    : lambda_(lambda), tau_(tau) {
  if (!(lambda > 0.0)) throw config_error("ModeSolution: lambda must be positive");
  if (!(tau > 0.0)) throw config_error("ModeSolution: tau must be positive");
  if (!(lambda * tau < kHalfPi))
    throw instability_error("ModeSolution: lambda * tau >= pi/2 (unstable mode)");
  if (!(horizon > 0.0)) throw config_error("ModeSolution: horizon must be positive");
  int m = 64;
  if (step > 0.0 && step < tau / 64.0) m = static_cast<int>(std::ceil(tau / step));
  steps_per_delay_ = m;
  h_ = tau / m;
  const int n_steps = static_cast<int>(std::ceil(horizon / h_ - 1e-12));
  horizon_ = n_steps * h_;

  values_.assign(n_steps + 1, 0.0);
  deriv_right_.assign(n_steps + 1, 0.0);
  deriv_left_.assign(n_steps + 1, 0.0);
  values_[0] = 1.0;

  // Delayed value accessors; the fundamental solution jumps 0 -> 1 at t = 0,
  // so grid index i - m == 0 needs a side convention.
  auto delayed_right = [&](int i) -> double {
    const int k = i - m;
    if (k < 0) return 0.0;
    return values_[k];
  };
  auto delayed_left = [&](int i) -> double {
    const int k = i - m;
    if (k <= 0) return 0.0;
    return values_[k];
  };
  auto delayed_mid = [&](int i) -> double {
    // value at t_i + h/2 - tau, interior to cell (i - m, i - m + 1)
    const int k = i - m;
    if (k < 0) return 0.0;
    return value_in_cell(k, 0.5);
  };

  deriv_right_[0] = -lambda_ * delayed_right(0);
  deriv_left_[0] = 0.0;
  for (int i = 0; i < n_steps; ++i) {
    const double k1 = -lambda_ * delayed_right(i);
    const double kmid = -lambda_ * delayed_mid(i);
    const double k4 = -lambda_ * delayed_left(i + 1);
    values_[i + 1] = values_[i] + (h_ / 6.0) * (k1 + 4.0 * kmid + k4);
    deriv_left_[i + 1] = k4;
    deriv_right_[i + 1] = -lambda_ * delayed_right(i + 1);
  }
}

double ModeSolution::value_in_cell(int cell, double xi) const {
  const double f0 = values_[cell];
  const double f1 = values_[cell + 1];
  const double d0 = deriv_right_[cell];
  const double d1 = deriv_left_[cell + 1];
  const double xi2 = xi * xi;
  const double xi3 = xi2 * xi;
  const double h00 = 2.0 * xi3 - 3.0 * xi2 + 1.0;
  const double h10 = xi3 - 2.0 * xi2 + xi;
  const double h01 = -2.0 * xi3 + 3.0 * xi2;
  const double h11 = xi3 - xi2;
  return f0 * h00 + h_ * d0 * h10 + f1 * h01 + h_ * d1 * h11;
}

double ModeSolution::value(double t) const {
  if (t < 0.0) return 0.0;
  if (t > horizon_ + 1e-9 * std::max(1.0, horizon_))
    throw numeric_error("ModeSolution: evaluation past the computed horizon");
  const int n_cells = static_cast<int>(values_.size()) - 1;
  int cell = static_cast<int>(std::floor(t / h_));
  if (cell >= n_cells) cell = n_cells - 1;
  const double xi = (t - cell * h_) / h_;
  if (xi == 0.0) return values_[cell];
  return value_in_cell(cell, xi);
}

ModeSolution fundamental_decayed(double lambda, double tau, bool* slow_decay) {
  const double cap = 200.0 / lambda;
  double horizon = std::max(10.0 * tau, 5.0 / lambda);
  bool slow = true;
  std::unique_ptr<ModeSolution> sol;
  while (true) {
    horizon = std::min(horizon, cap);
    sol = std::make_unique<ModeSolution>(lambda, tau, horizon, tau / 256.0);
    // decayed when |phi| < 1e-8 over the trailing full delay window
    const auto& v = sol->grid_values();
    const int m = static_cast<int>(std::round(tau / sol->step()));
    double tail_max = 0.0;
    for (int i = std::max(0, static_cast<int>(v.size()) - 1 - m);
         i < static_cast<int>(v.size()); ++i)
      tail_max = std::max(tail_max, std::fabs(v[i]));
    if (tail_max < 1e-8) {
      slow = false;
      break;
    }
    if (horizon >= cap) break;
    horizon *= 2.0;
  }
  if (slow_decay) *slow_decay = slow;
  return std::move(*sol);
}

namespace {

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Integrate piecewise over delay segments so breakpoint kinks do not degrade
// the adaptive rule.
double integrate_over_segments(const std::function<double(double)>& f, double a, double b,
                               double tau, double tol) {
  if (b <= a) return 0.0;
  double total = 0.0;
  const int first_seg = static_cast<int>(std::floor(a / tau));
  const int last_seg = static_cast<int>(std::ceil(b / tau));
  for (int j = first_seg; j < last_seg; ++j) {
    const double lo = std::max(a, j * tau);
    const double hi = std::min(b, (j + 1) * tau);
    if (hi > lo) total += adaptive_simpson(f, lo, hi, tol);
  }
  return total;
}

}  // namespace

double energy_integral(const ModeSolution& phi, double t_end) {
  const auto f = [&](double t) {
    const double v = phi.value(t);
    return v * v;
  };
  return integrate_over_segments(f, 0.0, t_end, phi.tau(), 1e-9);
}

double energy_integral(double lambda, double tau, double t_end) {
  ModeSolution phi(lambda, tau, std::max(t_end, tau), tau / 256.0);
  return energy_integral(phi, t_end);
}

double steady_energy(double lambda, double tau) {
  if (!(lambda > 0.0)) throw config_error("steady_energy: lambda must be positive");
  if (tau == 0.0) return 1.0 / (2.0 * lambda);
  if (!(lambda * tau < kHalfPi))
    throw instability_error("steady_energy: lambda * tau >= pi/2 (unstable mode)");
  return tau * f_energy(lambda * tau);
}

double autocorrelation_v(double lambda, double tau, double rho) {
  bool slow = false;
  const ModeSolution phi = fundamental_decayed(lambda, tau, &slow);
  if (slow) throw numeric_error("autocorrelation_v: fundamental solution decays too slowly");
  const double a_rho = std::fabs(rho);
  const double t_hi = phi.horizon();
  const auto f = [&](double t) { return phi.value(t) * phi.value(t - a_rho); };
  // V(rho) = V(-rho); integrand vanishes for t < max(rho, 0) by construction.
  return integrate_over_segments(f, a_rho, t_hi, tau, 1e-9);
}

HistoryFunction::HistoryFunction(double tau, Matrix samples) : tau_(tau), samples_(samples) {
  if (!(tau > 0.0)) throw config_error("history: tau must be positive");
  if (samples_.cols() < 3 || samples_.cols() % 2 == 0)
    throw config_error("history: needs an odd number of samples >= 3");
  for (double v : samples_.data())
    if (!std::isfinite(v)) throw config_error("history: samples must be finite");
}

HistoryFunction HistoryFunction::constant(const std::vector<double>& x0, double tau, int points) {
  Matrix m(static_cast<int>(x0.size()), points);
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < points; ++c) m(r, c) = x0[r];
  return HistoryFunction(tau, std::move(m));
}

double HistoryFunction::value(int node, double t) const {
  const int cells = samples_.cols() - 1;
  const double dt = tau_ / cells;
  double pos = (t + tau_) / dt;
  if (pos <= 0.0) return samples_(node, 0);
  if (pos >= cells) return samples_(node, cells);
  const int c = static_cast<int>(std::floor(pos));
  const double xi = pos - c;
  return (1.0 - xi) * samples_(node, c) + xi * samples_(node, c + 1);
}

std::vector<double> HistoryFunction::at(double t) const {
  std::vector<double> out(samples_.rows());
  for (int r = 0; r < samples_.rows(); ++r) out[r] = value(r, t);
  return out;
}

namespace {

void check_stability(const Spectrum& s, double tau) {
  if (!(tau > 0.0)) throw config_error("tau must be positive");
  if (!(s.lambda_max() * tau < kHalfPi))
    throw instability_error("tau >= stability margin pi/(2 lambda_n)");
}

// Simpson weights over the history grid (odd point count).
double simpson_sum(const std::vector<double>& g, double dt) {
  const int n = static_cast<int>(g.size());
  double acc = g[0] + g[n - 1];
  for (int j = 1; j < n - 1; ++j) acc += (j % 2 == 1 ? 4.0 : 2.0) * g[j];
  return acc * dt / 3.0;
}

}  // namespace

std::vector<double> transient_mean(const Spectrum& s, const Observable& c,
                                   const HistoryFunction& h, const std::vector<double>& ts) {
  const double tau = h.tau();
  check_stability(s, tau);
  if (h.n() != s.n()) throw config_error("history/spectrum dimension mismatch");
  const auto cq = c.coefficients(s);
  const int n = s.n();
  const int pts = h.points();
  const double dt = tau / (pts - 1);
  double t_max = 0.0;
  for (double t : ts) {
    if (t < 0.0) throw config_error("transient_mean: t must be nonnegative");
    t_max = std::max(t_max, t);
  }

  // Project the history onto the eigenbasis once.
  Matrix hq(n, pts);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < pts; ++j) {
      double acc = 0.0;
      for (int r = 0; r < n; ++r) acc += s.basis()(r, k) * h.sample(r, j);
      hq(k, j) = acc;
    }

  std::vector<std::unique_ptr<ModeSolution>> modes(n);
  for (int k = 1; k < n; ++k)
    if (std::fabs(cq[k]) > 0.0)
      modes[k] = std::make_unique<ModeSolution>(s.eigenvalues()[k], tau,
                                                std::max(t_max + tau, 2.0 * tau), tau / 256.0);

  std::vector<double> out;
  out.reserve(ts.size());
  std::vector<double> g(pts);
  for (double t : ts) {
    double mu = cq[0] * hq(0, pts - 1);  // lambda_1 = 0 mode: phi == 1, no convolution term
    for (int k = 1; k < n; ++k) {
      if (!(std::fabs(cq[k]) > 0.0)) continue;
      const double lambda = s.eigenvalues()[k];
      const ModeSolution& phi = *modes[k];
      for (int j = 0; j < pts; ++j) {
        const double sj = -tau + j * dt;
        g[j] = phi.value(t - tau - sj) * hq(k, j);
      }
      mu += cq[k] * (phi.value(t) * hq(k, pts - 1) - lambda * simpson_sum(g, dt));
    }
    out.push_back(mu);
  }
  return out;
}

double transient_mean(const Spectrum& s, const Observable& c, const HistoryFunction& h, double t) {
  return transient_mean(s, c, h, std::vector<double>{t}).front();
}

std::vector<double> transient_variance(const Spectrum& s, const Observable& c, double tau,
                                       double b, const std::vector<double>& ts) {
  check_stability(s, tau);
  const auto cq = c.coefficients(s);
  const int n = s.n();
  double t_max = 0.0;
  for (double t : ts) {
    if (t < 0.0) throw config_error("transient_variance: t must be nonnegative");
    t_max = std::max(t_max, t);
  }
  std::vector<std::unique_ptr<ModeSolution>> modes(n);
  for (int k = 1; k < n; ++k)
    if (cq[k] * cq[k] > 0.0)
      modes[k] = std::make_unique<ModeSolution>(s.eigenvalues()[k], tau, std::max(t_max, tau),
                                                tau / 256.0);
  std::vector<double> out;
  out.reserve(ts.size());
  for (double t : ts) {
    double var = cq[0] * cq[0] * t;  // marginally stable mode grows linearly
    for (int k = 1; k < n; ++k)
      if (cq[k] * cq[k] > 0.0) var += cq[k] * cq[k] * energy_integral(*modes[k], t);
    out.push_back(b * b * var);
  }
  return out;
}

double transient_variance(const Spectrum& s, const Observable& c, double tau, double b, double t) {
  return transient_variance(s, c, tau, b, std::vector<double>{t}).front();
}

}  // namespace netrisk
