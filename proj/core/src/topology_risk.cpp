#include "netrisk/topology_risk.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "netrisk/errors.hpp"
#include "netrisk/observables.hpp"
#include "netrisk/special_functions.hpp"

namespace netrisk {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_family_stability(const TopologyKind& kind, double tau, double weight) {
  if (!(tau > 0.0)) throw config_error("table_risk: tau must be positive");
  if (!(family_lambda_max(kind, weight) * tau < kHalfPi))
    throw instability_error("table_risk: tau >= pi / (2 lambda_max) for this family");
}

// sigma_i^2 for b = 1: sum over nonzero modes of (coefficient mass) * tau f(lambda tau).
double family_sigma_sq(const TopologyKind& kind, double tau, int node, double weight) {
  const int n = kind.node_count();
  if (node < 1 || node > n) throw config_error("table_risk: node out of range");
  switch (kind.family) {
    case TopologyFamily::Complete: {
      return (1.0 - 1.0 / n) * tau * f_energy(n * weight * tau);
    }
    case TopologyFamily::Wheel: {
      const int rim = kind.n1;
      const double hub_term = tau * f_energy((rim + 1) * weight * tau);
      if (node == 1) return (static_cast<double>(rim) / (rim + 1)) * hub_term;
      double acc = 0.0;
      for (int j = 1; j <= rim - 1; ++j) {
        const double lambda = (3.0 - 2.0 * std::cos(2.0 * std::numbers::pi * j / rim)) * weight;
        acc += f_energy(lambda * tau);
      }
      return (tau / rim) * acc + hub_term / (static_cast<double>(rim) * (rim + 1));
    }
    case TopologyFamily::Star:
    case TopologyFamily::CompleteBipartite: {
      const int n1 = (kind.family == TopologyFamily::Star) ? 1 : kind.n1;
      const int n2 = (kind.family == TopologyFamily::Star) ? kind.n1 - 1 : kind.n2;
      const int total = n1 + n2;
      const bool in_group1 = node <= n1;
      const double top = tau * f_energy(total * weight * tau);
      if (in_group1) {
        double acc = (static_cast<double>(n2) / (static_cast<double>(n1) * total)) * top;
        if (n1 > 1) acc += (1.0 - 1.0 / n1) * tau * f_energy(n2 * weight * tau);
        return acc;
      }
      double acc = (static_cast<double>(n1) / (static_cast<double>(n2) * total)) * top;
      if (n2 > 1) acc += (1.0 - 1.0 / n2) * tau * f_energy(n1 * weight * tau);
      return acc;
    }
    case TopologyFamily::Path: {
      double acc = 0.0;
      for (int k = 2; k <= n; ++k) {
        const double lambda = 2.0 * (1.0 - std::cos(std::numbers::pi * (k - 1) / n)) * weight;
        const double coeff =
            std::cos(std::numbers::pi * (k - 1) * (2.0 * node - 1.0) / (2.0 * n));
        acc += coeff * coeff * f_energy(lambda * tau);
      }
      return (2.0 * tau / n) * acc;
    }
    case TopologyFamily::Ring: {
      double acc = 0.0;
      for (int k = 2; k <= n; ++k) {
        const double lambda =
            2.0 * (1.0 - std::cos(2.0 * std::numbers::pi * (k - 1) / n)) * weight;
        acc += f_energy(lambda * tau);
      }
      return (tau / n) * acc;
    }
  }
  throw config_error("table_risk: unknown family");
}

}  // namespace

double family_lambda_max(const TopologyKind& kind, double weight) {
  switch (kind.family) {
    case TopologyFamily::Complete:
      return kind.n1 * weight;
    case TopologyFamily::Wheel:
      return (kind.n1 + 1) * weight;
    case TopologyFamily::CompleteBipartite:
      return (kind.n1 + kind.n2) * weight;
    case TopologyFamily::Star:
      return kind.n1 * weight;
    case TopologyFamily::Path: {
      const int n = kind.n1;
      return 2.0 * (1.0 + std::cos(std::numbers::pi / n)) * weight;
    }
    case TopologyFamily::Ring: {
      const int n = kind.n1;
      double lmax = 0.0;
      for (int j = 1; j < n; ++j)
        lmax = std::max(lmax, 2.0 * (1.0 - std::cos(2.0 * std::numbers::pi * j / n)));
      return lmax * weight;
    }
  }
  throw config_error("unknown family");
}

double table_risk(const TopologyKind& kind, const RiskParams& p, int node, double weight) {
  check_family_stability(kind, p.tau, weight);
  const double sigma = std::fabs(p.b) * std::sqrt(family_sigma_sq(kind, p.tau, node, weight));
  return std::numbers::sqrt2 * s_epsilon(p.eps, 0.0) * sigma;
}

TopologyRiskProfile topology_risk_profile(const TopologyKind& kind, const RiskParams& p,
                                          double weight) {
  TopologyRiskProfile profile;
  profile.kind = kind;
  const int n = kind.node_count();
  profile.node_risk.resize(n);
  profile.group_of_node.resize(n);
  for (int i = 1; i <= n; ++i) profile.node_risk[i - 1] = table_risk(kind, p, i, weight);
  switch (kind.family) {
    case TopologyFamily::Complete:
    case TopologyFamily::Ring:
      profile.groups = {"all"};
      for (int i = 0; i < n; ++i) profile.group_of_node[i] = 0;
      break;
    case TopologyFamily::Wheel:
      profile.groups = {"hub", "rim"};
      profile.group_of_node[0] = 0;
      for (int i = 1; i < n; ++i) profile.group_of_node[i] = 1;
      break;
    case TopologyFamily::Star:
      profile.groups = {"center", "leaf"};
      profile.group_of_node[0] = 0;
      for (int i = 1; i < n; ++i) profile.group_of_node[i] = 1;
      break;
    case TopologyFamily::CompleteBipartite:
      profile.groups = {"G1", "G2"};
      for (int i = 0; i < n; ++i) profile.group_of_node[i] = i < kind.n1 ? 0 : 1;
      break;
    case TopologyFamily::Path: {
      const int classes = (n + 1) / 2;
      for (int c = 0; c < classes; ++c) profile.groups.push_back("pair" + std::to_string(c + 1));
      for (int i = 0; i < n; ++i) profile.group_of_node[i] = std::min(i, n - 1 - i);
      break;
    }
  }
  return profile;
}

double cross_validate(const TopologyKind& kind, const RiskParams& p, double weight) {
  const WeightedGraph g = generate_topology(kind, weight);
  const Spectrum s = Spectrum::compute(g.laplacian());
  double max_dev = 0.0;
  for (int i = 1; i <= g.node_count(); ++i) {
    const Observable obs = Observable::deviation_from_average(i, g.node_count());
    const double generic = var_risk_steady(s, obs, p).value();
    const double closed = table_risk(kind, p, i, weight);
    max_dev = std::max(max_dev, std::fabs(generic - closed));
  }
  return max_dev;
}

namespace {

// Sign-change search with bisection refinement (tolerance 1e-8 in tau).
std::optional<double> find_crossing(const std::function<double(double)>& diff, double lo,
                                    double hi) {
  const int scan = 400;
  double prev_tau = lo;
  double prev_val = diff(lo);
  for (int i = 1; i <= scan; ++i) {
    const double tau = lo + (hi - lo) * i / scan;
    const double val = diff(tau);
    if (prev_val == 0.0) return prev_tau;
    if (prev_val * val < 0.0) {
      double a = prev_tau, b = tau, fa = prev_val;
      while (b - a > 1e-8) {
        const double mid = 0.5 * (a + b);
        const double fm = diff(mid);
        if (fm == 0.0) return mid;
        if (fa * fm < 0.0)
          b = mid;
        else {
          a = mid;
          fa = fm;
        }
      }
      return 0.5 * (a + b);
    }
    prev_tau = tau;
    prev_val = val;
  }
  return std::nullopt;
}

}  // namespace

std::optional<double> crossing_delay_complete(int n1, int n2, double eps, double b) {
  if (!(n1 >= 2 && n2 > n1)) throw config_error("crossing_delay_complete: needs 2 <= n1 < n2");
  const double margin = kHalfPi / n2;
  RiskParams p;
  p.eps = eps;
  p.b = b;
  auto diff = [&](double tau) {
    RiskParams q = p;
    q.tau = tau;
    return table_risk(TopologyKind::complete(n2), q, 1) -
           table_risk(TopologyKind::complete(n1), q, 1);
  };
  return find_crossing(diff, 1e-4 * margin, (1.0 - 1e-6) * margin);
}

std::optional<double> crossing_delay_bipartite(int n1, int n2, double eps, double b) {
  if (!(n1 >= 1 && n2 >= n1)) throw config_error("crossing_delay_bipartite: needs 1 <= n1 <= n2");
  const TopologyKind kind = TopologyKind::bipartite(n1, n2);
  const double margin = kHalfPi / (n1 + n2);
  RiskParams p;
  p.eps = eps;
  p.b = b;
  auto diff = [&](double tau) {
    RiskParams q = p;
    q.tau = tau;
    return table_risk(kind, q, 1) - table_risk(kind, q, n1 + 1);
  };
  return find_crossing(diff, 1e-4 * margin, (1.0 - 1e-6) * margin);
}

std::optional<double> crossing_delay_path(int n, double eps, double b) {
  if (n < 3) throw config_error("crossing_delay_path: needs n >= 3");
  const TopologyKind kind = TopologyKind::path(n);
  const double margin = kHalfPi / family_lambda_max(kind);
  RiskParams p;
  p.eps = eps;
  p.b = b;
  const int center = (n + 1) / 2;
  auto diff = [&](double tau) {
    RiskParams q = p;
    q.tau = tau;
    return table_risk(kind, q, 1) - table_risk(kind, q, center);
  };
  return find_crossing(diff, 1e-4 * margin, (1.0 - 1e-6) * margin);
}

std::vector<OrderingCheck> ordering_checks(const TopologyKind& kind, const RiskParams& p) {
  std::vector<OrderingCheck> checks;
  const double margin = kHalfPi / family_lambda_max(kind);
  const double tau_hi = 0.9 * margin;
  RiskParams q = p;
  q.tau = tau_hi;
  switch (kind.family) {
    case TopologyFamily::Wheel: {
      OrderingCheck c;
      c.description = "wheel hub riskier than rim in the upper stable range";
      c.pass = table_risk(kind, q, 1) > table_risk(kind, q, 2);
      auto diff = [&](double tau) {
        RiskParams r = p;
        r.tau = tau;
        return table_risk(kind, r, 1) - table_risk(kind, r, 2);
      };
      c.tau_star = find_crossing(diff, 1e-4 * margin, (1.0 - 1e-6) * margin);
      checks.push_back(c);
      break;
    }
    case TopologyFamily::Star: {
      OrderingCheck c;
      c.description = "star center riskier than leaves in the upper stable range";
      c.pass = table_risk(kind, q, 1) > table_risk(kind, q, 2);
      auto diff = [&](double tau) {
        RiskParams r = p;
        r.tau = tau;
        return table_risk(kind, r, 1) - table_risk(kind, r, 2);
      };
      c.tau_star = find_crossing(diff, 1e-4 * margin, (1.0 - 1e-6) * margin);
      checks.push_back(c);
      break;
    }
    case TopologyFamily::CompleteBipartite: {
      OrderingCheck c;
      c.description = "bipartite group risks cross at a unique delay";
      c.tau_star = crossing_delay_bipartite(kind.n1, kind.n2, p.eps, p.b);
      c.pass = kind.n1 == 1 ? true : c.tau_star.has_value();
      checks.push_back(c);
      break;
    }
    case TopologyFamily::Path: {
      OrderingCheck c;
      c.description = "path end/interior ordering flips at tau*";
      c.tau_star = crossing_delay_path(kind.n1, p.eps, p.b);
      c.pass = c.tau_star.has_value();
      checks.push_back(c);
      break;
    }
    case TopologyFamily::Ring: {
      // Odd/even comparison near the even ring's critical delay.
      const int n_odd = kind.n1 % 2 == 1 ? kind.n1 : kind.n1 + 1;
      const int n_even = kind.n1 % 2 == 1 ? kind.n1 + 1 : kind.n1;
      const TopologyKind odd = TopologyKind::ring(n_odd);
      const TopologyKind even = TopologyKind::ring(n_even);
      const double m =
          std::min(kHalfPi / family_lambda_max(odd), kHalfPi / family_lambda_max(even));
      RiskParams r = p;
      r.tau = 0.95 * m;
      OrderingCheck c;
      c.description = "odd ring safer than even ring near the critical delay";
      c.pass = table_risk(odd, r, 1) < table_risk(even, r, 1);
      checks.push_back(c);

      OrderingCheck u;
      u.description = "ring risk identical across nodes";
      u.pass = true;
      RiskParams rq = p;
      rq.tau = 0.5 * margin;
      const double first = table_risk(kind, rq, 1);
      for (int i = 2; i <= kind.n1; ++i)
        if (std::fabs(table_risk(kind, rq, i) - first) > 1e-12) u.pass = false;
      checks.push_back(u);
      break;
    }
    case TopologyFamily::Complete: {
      OrderingCheck c;
      c.description = "larger complete graph safer below tau*, riskier above";
      const int n2 = kind.n1 + 1;
      c.tau_star = crossing_delay_complete(kind.n1, n2, p.eps, p.b);
      bool ok = c.tau_star.has_value();
      if (ok) {
        RiskParams r = p;
        r.tau = 0.5 * *c.tau_star;
        ok = table_risk(TopologyKind::complete(n2), r, 1) <
             table_risk(TopologyKind::complete(kind.n1), r, 1);
      }
      c.pass = ok;
      checks.push_back(c);
      break;
    }
  }
  return checks;
}

}  // namespace netrisk
