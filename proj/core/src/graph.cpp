#include "netrisk/graph.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "netrisk/errors.hpp"

namespace netrisk {

namespace {

void check_connected(int n, const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> adj(n + 1);
  for (const auto& e : edges) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  std::vector<char> seen(n + 1, 0);
  std::vector<int> stack = {1};
  seen[1] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  if (count != n) throw config_error("graph is not connected");
}

}  // namespace

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges) : n_(n) {
  if (n < 2) throw config_error("graph needs at least 2 nodes");
  std::set<std::pair<int, int>> seen;
  edges_.reserve(edges.size());
  for (auto e : edges) {
    if (e.i < 1 || e.i > n || e.j < 1 || e.j > n)
      throw config_error("edge endpoint out of range");
    if (e.i == e.j) throw config_error("self-loops are not allowed");
    if (!(e.w > 0.0)) throw config_error("edge weights must be strictly positive");
    if (e.i > e.j) std::swap(e.i, e.j);
    if (!seen.insert({e.i, e.j}).second) throw config_error("duplicate edge");
    edges_.push_back(e);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });
  check_connected(n_, edges_);
}

double WeightedGraph::weight(int i, int j) const {
  if (i > j) std::swap(i, j);
  for (const auto& e : edges_)
    if (e.i == i && e.j == j) return e.w;
  return 0.0;
}

double WeightedGraph::weighted_degree(int i) const {
  double d = 0.0;
  for (const auto& e : edges_)
    if (e.i == i || e.j == i) d += e.w;
  return d;
}

std::vector<int> WeightedGraph::neighbors(int i) const {
  std::vector<int> out;
  for (const auto& e : edges_) {
    if (e.i == i) out.push_back(e.j);
    if (e.j == i) out.push_back(e.i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Matrix WeightedGraph::laplacian() const {
  Matrix l(n_, n_);
  for (const auto& e : edges_) {
    l(e.i - 1, e.j - 1) -= e.w;
    l(e.j - 1, e.i - 1) -= e.w;
    l(e.i - 1, e.i - 1) += e.w;
    l(e.j - 1, e.j - 1) += e.w;
  }
  return l;
}

WeightedGraph WeightedGraph::parse_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int n = -1;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    if (n < 0) {
      if (ls >> n) continue;
      continue;  // blank/comment line before the header
    }
    Edge e;
    if (ls >> e.i >> e.j >> e.w) {
      edges.push_back(e);
    } else if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) {
      throw config_error("malformed graph line: " + line);
    }
  }
  if (n < 0) throw config_error("graph file missing node count");
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph WeightedGraph::parse_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("bad graph JSON: ") + e.what());
  }
  if (!j.contains("n") || !j.contains("edges")) throw config_error("graph JSON needs n and edges");
  std::vector<Edge> edges;
  for (const auto& row : j["edges"]) {
    if (!row.is_array() || row.size() != 3) throw config_error("graph JSON edge must be [i, j, w]");
    edges.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<double>()});
  }
  return WeightedGraph(j["n"].get<int>(), std::move(edges));
}

WeightedGraph WeightedGraph::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open graph file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_json(text);
  return parse_text(text);
}

std::string WeightedGraph::to_text() const {
  std::ostringstream out;
  out << n_ << "\n";
  for (const auto& e : edges_) out << e.i << " " << e.j << " " << e.w << "\n";
  return out.str();
}

std::string WeightedGraph::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  auto& arr = j["edges"] = nlohmann::json::array();
  for (const auto& e : edges_) arr.push_back({e.i, e.j, e.w});
  return j.dump();
}

void jacobi_eigendecompose(const Matrix& a, std::vector<double>& eigenvalues, Matrix& basis) {
  const int n = a.rows();
  if (a.cols() != n) throw config_error("jacobi: matrix must be square");
  Matrix m = a;
  basis = Matrix::identity(n);

  const double scale = std::max(1.0, m.frobenius_norm());
  const double tol = 1e-12 * scale;

  auto off_norm = [&]() {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += 2.0 * m(p, q) * m(p, q);
    return std::sqrt(s);
  };

  bool converged = false;
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_norm() <= tol) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = basis(k, p), vkq = basis(k, q);
          basis(k, p) = c * vkp - s * vkq;
          basis(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged && off_norm() > tol)
    throw numeric_error("jacobi: no convergence within 100 sweeps");

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = m(i, i);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return diag[x] < diag[y]; });

  eigenvalues.resize(n);
  Matrix sorted(n, n);
  for (int c = 0; c < n; ++c) {
    eigenvalues[c] = diag[order[c]];
    // Deterministic sign: largest-magnitude entry positive.
    int imax = 0;
    double vmax = 0.0;
    for (int r = 0; r < n; ++r) {
      const double v = std::fabs(basis(r, order[c]));
      if (v > vmax) {
        vmax = v;
        imax = r;
      }
    }
    const double sign = basis(imax, order[c]) < 0 ? -1.0 : 1.0;
    for (int r = 0; r < n; ++r) sorted(r, c) = sign * basis(r, order[c]);
  }
  basis = std::move(sorted);
}

Spectrum::Spectrum(std::vector<double> eigenvalues, Matrix basis)
    : eigenvalues_(std::move(eigenvalues)), basis_(std::move(basis)) {
  static std::atomic<std::uint64_t> next_id{1};
  id_ = next_id.fetch_add(1);
}

Spectrum Spectrum::compute(const Matrix& laplacian) {
  std::vector<double> ev;
  Matrix basis;
  jacobi_eigendecompose(laplacian, ev, basis);
  const int n = laplacian.rows();
  const double scale = std::max(1.0, std::fabs(ev.back()));
  if (std::fabs(ev.front()) > 1e-7 * scale)
    throw numeric_error("spectrum: smallest eigenvalue is not zero (not a Laplacian?)");
  if (n >= 2 && ev[1] <= 1e-12 * scale)
    throw numeric_error("spectrum: lambda_2 ~ 0, graph is numerically disconnected");
  ev.front() = 0.0;
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  for (int r = 0; r < n; ++r) basis(r, 0) = inv_sqrt_n;
  return Spectrum(std::move(ev), std::move(basis));
}

double total_effective_resistance(const Spectrum& s) {
  if (s.lambda2() < 1e-12)
    throw numeric_error("effective resistance: lambda_2 below 1e-12 (near disconnection)");
  double sum = 0.0;
  for (int k = 2; k <= s.n(); ++k) sum += 1.0 / s.eigenvalue(k);
  return s.n() * sum;
}

double pairwise_effective_resistance(const Spectrum& s, int i, int j) {
  if (i == j) throw config_error("pairwise effective resistance needs i != j");
  if (s.lambda2() < 1e-12)
    throw numeric_error("effective resistance: lambda_2 below 1e-12 (near disconnection)");
  double sum = 0.0;
  for (int k = 2; k <= s.n(); ++k) {
    const double d = s.basis()(i - 1, k - 1) - s.basis()(j - 1, k - 1);
    sum += d * d / s.eigenvalue(k);
  }
  return sum;
}

double pairwise_effective_resistance(const WeightedGraph& g, int i, int j) {
  return pairwise_effective_resistance(Spectrum::compute(g.laplacian()), i, j);
}

double stability_margin(const Spectrum& s) { return std::numbers::pi / (2.0 * s.lambda_max()); }

int TopologyKind::node_count() const {
  switch (family) {
    case TopologyFamily::Wheel:
      return n1 + 1;
    case TopologyFamily::CompleteBipartite:
      return n1 + n2;
    default:
      return n1;
  }
}

std::string TopologyKind::name() const {
  switch (family) {
    case TopologyFamily::Complete:
      return "complete:" + std::to_string(n1);
    case TopologyFamily::Wheel:
      return "wheel:" + std::to_string(n1);
    case TopologyFamily::CompleteBipartite:
      return "bipartite:" + std::to_string(n1) + "," + std::to_string(n2);
    case TopologyFamily::Path:
      return "path:" + std::to_string(n1);
    case TopologyFamily::Ring:
      return "ring:" + std::to_string(n1);
    case TopologyFamily::Star:
      return "star:" + std::to_string(n1);
  }
  return "?";
}

WeightedGraph generate_topology(const TopologyKind& kind, double weight) {
  if (!(weight > 0.0)) throw config_error("topology weight must be positive");
  std::vector<Edge> edges;
  switch (kind.family) {
    case TopologyFamily::Complete: {
      if (kind.n1 < 2) throw config_error("complete graph needs n >= 2");
      for (int i = 1; i <= kind.n1; ++i)
        for (int j = i + 1; j <= kind.n1; ++j) edges.push_back({i, j, weight});
      return WeightedGraph(kind.n1, std::move(edges));
    }
    case TopologyFamily::Wheel: {
      const int rim = kind.n1;
      if (rim < 3) throw config_error("wheel graph needs rim >= 3");
      for (int r = 0; r < rim; ++r) {
        edges.push_back({1, 2 + r, weight});                       // spoke
        edges.push_back({2 + r, 2 + (r + 1) % rim, weight});       // rim cycle
      }
      return WeightedGraph(rim + 1, std::move(edges));
    }
    case TopologyFamily::CompleteBipartite: {
      if (kind.n1 < 1 || kind.n2 < 1 || kind.n1 > kind.n2)
        throw config_error("bipartite graph needs 1 <= n1 <= n2");
      for (int i = 1; i <= kind.n1; ++i)
        for (int j = 1; j <= kind.n2; ++j) edges.push_back({i, kind.n1 + j, weight});
      return WeightedGraph(kind.n1 + kind.n2, std::move(edges));
    }
    case TopologyFamily::Path: {
      if (kind.n1 < 2) throw config_error("path graph needs n >= 2");
      for (int i = 1; i < kind.n1; ++i) edges.push_back({i, i + 1, weight});
      return WeightedGraph(kind.n1, std::move(edges));
    }
    case TopologyFamily::Ring: {
      if (kind.n1 < 3) throw config_error("ring graph needs n >= 3");
      for (int i = 1; i <= kind.n1; ++i)
        edges.push_back({i, i % kind.n1 + 1, weight});
      return WeightedGraph(kind.n1, std::move(edges));
    }
    case TopologyFamily::Star: {
      if (kind.n1 < 3) throw config_error("star graph needs n >= 3");
      for (int i = 2; i <= kind.n1; ++i) edges.push_back({1, i, weight});
      return WeightedGraph(kind.n1, std::move(edges));
    }
  }
  throw config_error("unknown topology kind");
}

namespace {

// Helmert-style orthonormal vectors spanning ones-orthogonal space over the
// index subset `support` (0-based positions in an n-vector).
void append_helmert(Matrix& basis, int& col, int n, const std::vector<int>& support) {
  const int m = static_cast<int>(support.size());
  for (int k = 2; k <= m; ++k) {
    const double norm = std::sqrt(static_cast<double>(k) * (k - 1));
    for (int r = 0; r < n; ++r) basis(r, col) = 0.0;
    for (int j = 0; j < k - 1; ++j) basis(support[j], col) = 1.0 / norm;
    basis(support[k - 1], col) = -(k - 1.0) / norm;
    ++col;
  }
}

// Real circulant basis over `support` (cycle order): cosine/sine pairs per
// frequency j, one alternating vector when the cycle length is even.
// Appends vectors along with their eigenvalue from `lambda_of_j`.
template <typename LambdaFn>
void append_circulant(Matrix& basis, std::vector<double>& evs, int& col, int n,
                      const std::vector<int>& support, LambdaFn lambda_of_j) {
  const int m = static_cast<int>(support.size());
  for (int j = 1; j <= m / 2; ++j) {
    const double lambda = lambda_of_j(j);
    if (2 * j == m) {
      for (int r = 0; r < n; ++r) basis(r, col) = 0.0;
      for (int l = 0; l < m; ++l)
        basis(support[l], col) = (l % 2 == 0 ? 1.0 : -1.0) / std::sqrt(static_cast<double>(m));
      evs[col] = lambda;
      ++col;
    } else {
      const double scale = std::sqrt(2.0 / m);
      for (int r = 0; r < n; ++r) {
        basis(r, col) = 0.0;
        basis(r, col + 1) = 0.0;
      }
      for (int l = 0; l < m; ++l) {
        const double ang = 2.0 * std::numbers::pi * j * l / m;
        basis(support[l], col) = scale * std::cos(ang);
        basis(support[l], col + 1) = scale * std::sin(ang);
      }
      evs[col] = lambda;
      evs[col + 1] = lambda;
      col += 2;
    }
  }
}

Spectrum make_spectrum_sorted(std::vector<double> evs, Matrix basis) {
  const int n = static_cast<int>(evs.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return evs[a] < evs[b]; });
  std::vector<double> sorted_evs(n);
  Matrix sorted_basis(n, n);
  for (int c = 0; c < n; ++c) {
    sorted_evs[c] = evs[order[c]];
    for (int r = 0; r < n; ++r) sorted_basis(r, c) = basis(r, order[c]);
  }
  // Reuse Spectrum::compute's construction path via a private-friend pattern:
  // rebuild through the Laplacian would lose exactness, so construct directly.
  struct Access : Spectrum {
    Access(std::vector<double> e, Matrix b) : Spectrum(std::move(e), std::move(b)) {}
  };
  return Access(std::move(sorted_evs), std::move(sorted_basis));
}

}  // namespace

Spectrum analytic_spectrum(const TopologyKind& kind, double weight) {
  const int n = kind.node_count();
  std::vector<double> evs(n, 0.0);
  Matrix basis(n, n);
  int col = 0;
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  for (int r = 0; r < n; ++r) basis(r, col) = inv_sqrt_n;
  evs[col] = 0.0;
  ++col;

  switch (kind.family) {
    case TopologyFamily::Complete: {
      std::vector<int> all(n);
      for (int i = 0; i < n; ++i) all[i] = i;
      const int first = col;
      append_helmert(basis, col, n, all);
      for (int c = first; c < col; ++c) evs[c] = n * weight;
      break;
    }
    case TopologyFamily::Star:
    case TopologyFamily::CompleteBipartite: {
      const int n1 = (kind.family == TopologyFamily::Star) ? 1 : kind.n1;
      const int n2 = (kind.family == TopologyFamily::Star) ? kind.n1 - 1 : kind.n2;
      std::vector<int> g1(n1), g2(n2);
      for (int i = 0; i < n1; ++i) g1[i] = i;
      for (int i = 0; i < n2; ++i) g2[i] = n1 + i;
      int first = col;
      append_helmert(basis, col, n, g2);  // eigenvalue n1: vectors live on group 2
      for (int c = first; c < col; ++c) evs[c] = n1 * weight;
      first = col;
      append_helmert(basis, col, n, g1);  // eigenvalue n2: vectors live on group 1
      for (int c = first; c < col; ++c) evs[c] = n2 * weight;
      const double a = std::sqrt(static_cast<double>(n2) / (static_cast<double>(n) * n1));
      const double b = -std::sqrt(static_cast<double>(n1) / (static_cast<double>(n) * n2));
      for (int i = 0; i < n1; ++i) basis(i, col) = a;
      for (int i = 0; i < n2; ++i) basis(n1 + i, col) = b;
      evs[col] = n * weight;
      ++col;
      break;
    }
    case TopologyFamily::Wheel: {
      const int rim = kind.n1;
      std::vector<int> support(rim);
      for (int i = 0; i < rim; ++i) support[i] = 1 + i;
      append_circulant(basis, evs, col, n, support, [&](int j) {
        return (3.0 - 2.0 * std::cos(2.0 * std::numbers::pi * j / rim)) * weight;
      });
      const double norm = std::sqrt(static_cast<double>(rim) * (rim + 1));
      basis(0, col) = rim / norm;
      for (int i = 0; i < rim; ++i) basis(1 + i, col) = -1.0 / norm;
      evs[col] = (rim + 1) * weight;
      ++col;
      break;
    }
    case TopologyFamily::Path: {
      for (int k = 2; k <= n; ++k) {
        const double scale = std::sqrt(2.0 / n);
        for (int l = 1; l <= n; ++l)
          basis(l - 1, col) =
              scale * std::cos(std::numbers::pi * (k - 1) * (2.0 * l - 1.0) / (2.0 * n));
        evs[col] = 2.0 * (1.0 - std::cos(std::numbers::pi * (k - 1) / n)) * weight;
        ++col;
      }
      break;
    }
    case TopologyFamily::Ring: {
      std::vector<int> support(n);
      for (int i = 0; i < n; ++i) support[i] = i;
      append_circulant(basis, evs, col, n, support, [&](int j) {
        return 2.0 * (1.0 - std::cos(2.0 * std::numbers::pi * j / n)) * weight;
      });
      break;
    }
  }
  if (col != n) throw numeric_error("analytic_spectrum: basis construction mismatch");
  return make_spectrum_sorted(std::move(evs), std::move(basis));
}

WeightedGraph random_connected_graph(int n, double edge_prob, double weight_lo, double weight_hi,
                                     std::optional<double> tau_target, std::uint64_t seed) {
  if (n < 2) throw config_error("random graph needs n >= 2");
  if (!(edge_prob > 0.0 && edge_prob <= 1.0)) throw config_error("edge_prob must be in (0, 1]");
  if (!(weight_lo > 0.0 && weight_lo <= weight_hi))
    throw config_error("need 0 < weight_lo <= weight_hi");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> wdist(weight_lo, weight_hi);

  const int max_attempts = 10 * n;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<Edge> edges;
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        if (unit(rng) < edge_prob) edges.push_back({i, j, wdist(rng)});
    try {
      WeightedGraph g(n, edges);
      if (tau_target) {
        const Spectrum s = Spectrum::compute(g.laplacian());
        const double target_lambda_max = 0.95 * (std::numbers::pi / 2.0) / *tau_target;
        const double factor = target_lambda_max / s.lambda_max();
        std::vector<Edge> scaled = g.edges();
        for (auto& e : scaled) e.w *= factor;
        return WeightedGraph(n, std::move(scaled));
      }
      return g;
    } catch (const config_error&) {
      continue;  // disconnected draw; resample
    }
  }
  throw numeric_error("random_connected_graph: connectivity not achieved within 10n resamples");
}

}  // namespace netrisk
