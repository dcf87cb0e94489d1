#include "netrisk/special_functions.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "netrisk/errors.hpp"

namespace netrisk {

namespace {

constexpr double kTwoOverSqrtPi = 1.1283791670955126;  // 2 / sqrt(pi)

// Maclaurin series erf(x) = (2/sqrt(pi)) sum (-1)^k x^{2k+1} / (k! (2k+1)).
// Converges to machine precision for |x| <= 2 well within 60 terms.
double erf_series(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int k = 1; k < 90; ++k) {
    term *= -x2 / k;
    const double contrib = term / (2 * k + 1);
    sum += contrib;
    if (std::fabs(contrib) < 1e-18 * std::fabs(sum)) break;
  }
  return kTwoOverSqrtPi * sum;
}

// Continued fraction for erfc(x), x > 0 (Lentz's method):
//   erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + 1/2/(x + 1/(x + 3/2/(x + ...))))
double erfc_continued_fraction(double x) {
  const double tiny = 1e-300;
  double b = x;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 300; ++i) {
    const double a = 0.5 * i;
    b = x;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double delta = c * d;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-17) break;
  }
  return std::exp(-x * x) / std::numbers::sqrt2 / std::sqrt(std::numbers::pi / 2.0) * h;
}

}  // namespace

double erf(double x) {
  const double ax = std::fabs(x);
  double val;
  if (ax <= 2.0) {
    val = erf_series(ax);
  } else if (ax >= 6.5) {
    val = 1.0;  // erfc < 4e-20, below double resolution of 1 - erfc
  } else {
    val = 1.0 - erfc_continued_fraction(ax);
  }
  return x < 0 ? -val : val;
}

double erfc(double x) {
  if (x < 0) return 2.0 - erfc(-x);
  if (x <= 2.0) return 1.0 - erf_series(x);
  if (x >= 27.0) return 0.0;
  return erfc_continued_fraction(x);
}

double erf_inv(double p) {
  if (!(p > -1.0 && p < 1.0)) throw config_error("erf_inv: argument must be in (-1, 1)");
  if (p == 0.0) return 0.0;
  const double ap = std::fabs(p);
  // Winitzki-style initial guess, then Newton on our own erf.
  const double a = 0.147;
  const double ln1mp2 = std::log1p(-ap * ap);
  const double t1 = 2.0 / (std::numbers::pi * a) + 0.5 * ln1mp2;
  double x = std::sqrt(std::sqrt(t1 * t1 - ln1mp2 / a) - t1);
  for (int it = 0; it < 60; ++it) {
    const double err = erf(x) - ap;
    const double deriv = kTwoOverSqrtPi * std::exp(-x * x);
    const double step = err / deriv;
    x -= step;
    if (std::fabs(step) < 1e-15 * (1.0 + x)) break;
  }
  return p < 0 ? -x : x;
}

double f_energy(double x) {
  if (!(x > 0.0 && x < std::numbers::pi / 2.0))
    throw config_error("f_energy: argument must lie in (0, pi/2)");
  return std::cos(x) / (2.0 * x * (1.0 - std::sin(x)));
}

double f_energy_derivative(double x) {
  // f'/f = -tan(x) - 1/x + cos(x)/(1 - sin(x))
  const double f = f_energy(x);
  return f * (-std::tan(x) - 1.0 / x + std::cos(x) / (1.0 - std::sin(x)));
}

double bisect_root(const std::function<double(double)>& g, double lo, double hi) {
  double flo = g(lo);
  double fhi = g(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw numeric_error("bisect_root: bracket does not change sign");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = g(mid);
    if (fm == 0.0 || hi - lo < 1e-11) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

double golden_section_min(const std::function<double(double)>& g, double lo, double hi,
                          double tol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 400 && (b - a) > tol; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = g(x2);
    }
  }
  return 0.5 * (a + b);
}

double z_plus() {
  static const double z = bisect_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0);
  return z;
}

double s_epsilon(double eps, double alpha) {
  if (!(eps > 0.0 && eps < 1.0)) throw config_error("s_epsilon: eps must be in (0, 1)");
  if (alpha < 0.0) throw config_error("s_epsilon: alpha must be nonnegative");
  const auto g = [&](double d) { return 0.5 * (erf(d) + erf(d + 2.0 * alpha)) - (1.0 - eps); };
  if (g(0.0) >= 0.0) return 0.0;
  // erf(delta) alone reaches 1-eps at erf_inv(1-eps), so that always brackets.
  double hi = erf_inv(1.0 - eps);
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-11; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) >= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

FoldedMoments folded_moments(double mu, double sigma) {
  if (sigma < 0.0) throw config_error("folded_moments: sigma must be nonnegative");
  FoldedMoments out;
  if (sigma == 0.0) {
    out.mean = std::fabs(mu);
    out.variance = 0.0;
    return out;
  }
  const double s2 = sigma * std::numbers::sqrt2;
  out.mean = sigma * std::sqrt(2.0 / std::numbers::pi) * std::exp(-mu * mu / (2.0 * sigma * sigma)) -
             mu * erf(-mu / s2);
  out.variance = mu * mu + sigma * sigma - out.mean * out.mean;
  if (out.variance < 0.0 && out.variance > -1e-12) out.variance = 0.0;
  return out;
}

double kappa_exp(double mu, double sigma, double beta) {
  if (!(sigma > 0.0)) throw config_error("kappa_exp: sigma must be positive");
  if (!(beta > 0.0)) throw config_error("kappa_exp: beta must be positive");
  const double bm = beta * mu;
  if (bm > 700.0 || bm < -700.0) throw numeric_error("kappa_exp: exp(beta*mu) overflow");
  const double a = -mu / (std::numbers::sqrt2 * sigma);
  const double c = beta * sigma / std::numbers::sqrt2;
  return (1.0 - erf(a - c)) * std::exp(bm) + (1.0 + erf(a + c)) * std::exp(-bm);
}

double p_k(double x, int k, int n) {
  if (!(x > 0.0 && x < std::numbers::pi / 2.0))
    throw config_error("p_k: argument must lie in (0, pi/2)");
  const double alpha = k - 1;
  const double beta = 2.0 * (n - k) / std::numbers::pi;
  return (alpha + beta * x) * std::cos(x) / (x * x * (1.0 - std::sin(x)));
}

double p_k_minimum(int k, int n) {
  if (k < 2 || k > n) throw config_error("p_k_minimum: requires 2 <= k <= n");
  const double hi = std::numbers::pi / 2.0;
  const double xmin = golden_section_min([&](double x) { return p_k(x, k, n); }, 1e-8, hi - 1e-8);
  return p_k(xmin, k, n);
}

double p_dagger(int n) {
  if (n < 2) throw config_error("p_dagger: requires n >= 2");
  static std::map<int, double> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 2; k <= n; ++k) best = std::min(best, p_k_minimum(k, n));
  cache.emplace(n, best);
  return best;
}

}  // namespace netrisk
