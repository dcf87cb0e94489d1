#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netrisk/matrix.hpp"

namespace netrisk {

struct Edge {
  int i = 0;  // 1-based
  int j = 0;  // 1-based
  double w = 0.0;
};

// Undirected weighted simple graph. Construction validates: n >= 2, indices in
// range, strictly positive weights, no self-loops, no duplicate edges, and
// connectivity (every theorem downstream assumes a connected graph).
class WeightedGraph {
 public:
  WeightedGraph(int n, std::vector<Edge> edges);

  int node_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  double weight(int i, int j) const;  // 0 when not adjacent
  double weighted_degree(int i) const;
  std::vector<int> neighbors(int i) const;

  Matrix laplacian() const;

  // Text format: first line `n`, then `i j w` lines; `#` starts a comment.
  // JSON format: {"n": int, "edges": [[i, j, w], ...]}.
  static WeightedGraph load(const std::string& path);
  static WeightedGraph parse_text(const std::string& text);
  static WeightedGraph parse_json(const std::string& text);
  std::string to_text() const;
  std::string to_json() const;

 private:
  int n_;
  std::vector<Edge> edges_;
};

// Eigendecomposition L = Q diag(lambda) Q^T with ascending eigenvalues,
// lambda_1 = 0 and q_1 = (1/sqrt(n)) * ones. Computed by cyclic Jacobi
// rotations (off-diagonal Frobenius tolerance 1e-12 relative, 100-sweep cap).
// Instances carry a unique identity token so cached observable coefficients
// can detect being replayed against a different spectrum.
class Spectrum {
 public:
  static Spectrum compute(const Matrix& laplacian);

  int n() const { return static_cast<int>(eigenvalues_.size()); }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  double eigenvalue(int k) const { return eigenvalues_[k - 1]; }  // 1-based, per the formulas
  const Matrix& basis() const { return basis_; }                  // columns are q_k
  std::vector<double> eigenvector(int k) const { return basis_.column(k - 1); }
  double lambda2() const { return eigenvalues_[1]; }
  double lambda_max() const { return eigenvalues_.back(); }
  std::uint64_t id() const { return id_; }

 protected:
  Spectrum(std::vector<double> eigenvalues, Matrix basis);

 private:
  std::vector<double> eigenvalues_;
  Matrix basis_;
  std::uint64_t id_;
};

// Symmetric Jacobi eigensolver used by Spectrum and the joint-risk
// factorization. Returns ascending eigenvalues and the orthonormal basis.
void jacobi_eigendecompose(const Matrix& a, std::vector<double>& eigenvalues, Matrix& basis);

// Total effective resistance  Xi_G = n * sum_{k>=2} 1/lambda_k.
double total_effective_resistance(const Spectrum& s);

// Effective resistance between nodes i and j (1-based):
// sum_{k>=2} (q_k(i) - q_k(j))^2 / lambda_k.
double pairwise_effective_resistance(const Spectrum& s, int i, int j);
double pairwise_effective_resistance(const WeightedGraph& g, int i, int j);

// tau_max = pi / (2 lambda_n); callers must keep tau strictly below it.
double stability_margin(const Spectrum& s);

enum class TopologyFamily { Complete, Wheel, CompleteBipartite, Path, Ring, Star };

struct TopologyKind {
  TopologyFamily family = TopologyFamily::Complete;
  int n1 = 0;  // Complete/Path/Ring/Star node count; Wheel rim count; bipartite group 1
  int n2 = 0;  // bipartite group 2 only

  static TopologyKind complete(int n) { return {TopologyFamily::Complete, n, 0}; }
  static TopologyKind wheel(int rim) { return {TopologyFamily::Wheel, rim, 0}; }
  static TopologyKind bipartite(int n1, int n2) {
    return {TopologyFamily::CompleteBipartite, n1, n2};
  }
  static TopologyKind path(int n) { return {TopologyFamily::Path, n, 0}; }
  static TopologyKind ring(int n) { return {TopologyFamily::Ring, n, 0}; }
  static TopologyKind star(int n) { return {TopologyFamily::Star, n, 0}; }

  int node_count() const;
  std::string name() const;
};

// Canonical labelings: wheel hub is node 1, bipartite group 1 first,
// star center is node 1. All edges carry the same weight.
WeightedGraph generate_topology(const TopologyKind& kind, double weight = 1.0);

// Closed-form eigenstructure for the five families (ring/wheel circulant
// eigenvectors stored as the real cosine/sine pair basis).
Spectrum analytic_spectrum(const TopologyKind& kind, double weight = 1.0);

// Erdos-Renyi draw resampled until connected (at most 10n attempts), weights
// uniform in [weight_lo, weight_hi]. When tau_target is given, all weights are
// rescaled by one common factor so lambda_n * tau_target = 0.95 * (pi/2).
WeightedGraph random_connected_graph(int n, double edge_prob, double weight_lo, double weight_hi,
                                     std::optional<double> tau_target, std::uint64_t seed);

}  // namespace netrisk
