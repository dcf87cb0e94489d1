#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netrisk/graph.hpp"
#include "netrisk/risk.hpp"

namespace netrisk {

// Closed-form steady VaR for the deviation-from-average observable on the
// five named families, from their analytic eigenstructure. Weighted edges
// rescale every eigenvalue by the common weight.

// Largest Laplacian eigenvalue of the family (weight-scaled); the stability
// requirement is tau < pi / (2 lambda_max).
double family_lambda_max(const TopologyKind& kind, double weight = 1.0);

// Steady VaR sqrt(2) S_eps(0) b sigma_i at `node` (1-based, canonical
// labeling). Throws instability_error when tau is out of range.
double table_risk(const TopologyKind& kind, const RiskParams& p, int node, double weight = 1.0);

struct TopologyRiskProfile {
  TopologyKind kind;
  std::vector<double> node_risk;    // per node
  std::vector<int> group_of_node;   // group index per node
  std::vector<std::string> groups;  // group labels (hub/rim, G1/G2, ...)
};
TopologyRiskProfile topology_risk_profile(const TopologyKind& kind, const RiskParams& p,
                                          double weight = 1.0);

// Max |table_risk - generic spectral pipeline| over all nodes.
double cross_validate(const TopologyKind& kind, const RiskParams& p, double weight = 1.0);

// Unique delay where two complete graphs K_{n1}, K_{n2} (n1 < n2) swap their
// risk ordering, searched over the common stability interval. nullopt when no
// sign change is found.
std::optional<double> crossing_delay_complete(int n1, int n2, double eps, double b = 1.0);

// Delay where the two bipartite group risks cross (node in group 1 vs node in
// group 2), over (0, pi/(2 n)).
std::optional<double> crossing_delay_bipartite(int n1, int n2, double eps, double b = 1.0);

// Delay where the path end/interior node ordering flips.
std::optional<double> crossing_delay_path(int n, double eps, double b = 1.0);

struct OrderingCheck {
  std::string description;
  bool pass = false;
  std::optional<double> tau_star;
};

// Family-specific ordering claims, asserted in the upper stable range
// (orderings that cross report the measured tau*).
std::vector<OrderingCheck> ordering_checks(const TopologyKind& kind, const RiskParams& p);

}  // namespace netrisk
