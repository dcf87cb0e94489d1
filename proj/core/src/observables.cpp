#include "netrisk/observables.hpp"

#include <cmath>
#include <stdexcept>

#include "netrisk/errors.hpp"

namespace netrisk {

Observable::Observable(ObservableKind kind, std::vector<double> c, std::string label)
    : kind_(kind), c_(std::move(c)), label_(std::move(label)) {
  if (norm2(c_) <= 0.0) throw config_error("observable vector must be nonzero");
}

Observable Observable::deviation_from_average(int i, int n) {
  if (i < 1 || i > n) throw config_error("deviation_from_average: node out of range");
  std::vector<double> c(n, -1.0 / n);
  c[i - 1] += 1.0;
  return Observable(ObservableKind::DeviationFromAverage, std::move(c),
                    "m" + std::to_string(i));
}

Observable Observable::pairwise(int i, int j, int n) {
  if (i < 1 || i > n || j < 1 || j > n) throw config_error("pairwise: node out of range");
  if (i == j) throw config_error("pairwise: needs two distinct nodes");
  std::vector<double> c(n, 0.0);
  c[i - 1] = 1.0;
  c[j - 1] = -1.0;
  return Observable(ObservableKind::Pairwise, std::move(c),
                    "d" + std::to_string(i) + "," + std::to_string(j));
}

Observable Observable::neighbor_average_deviation(const WeightedGraph& g, int i) {
  if (i < 1 || i > g.node_count()) throw config_error("neighbor deviation: node out of range");
  const auto nbrs = g.neighbors(i);
  if (nbrs.empty()) throw config_error("neighbor deviation: node has no neighbors");
  std::vector<double> c(g.node_count(), 0.0);
  c[i - 1] = 1.0;
  for (int j : nbrs) c[j - 1] -= 1.0 / nbrs.size();
  return Observable(ObservableKind::NeighborAverage, std::move(c), "nb" + std::to_string(i));
}

Observable Observable::average_state(int n) {
  std::vector<double> c(n, 1.0 / n);
  return Observable(ObservableKind::AverageState, std::move(c), "avg");
}

Observable Observable::custom(std::vector<double> c) {
  return Observable(ObservableKind::Custom, std::move(c), "custom");
}

Observable Observable::bound_to(const Spectrum& s) const {
  if (s.n() != n()) throw config_error("observable/spectrum dimension mismatch");
  Observable out = *this;
  out.spectrum_id_ = s.id();
  out.coeffs_ = spectral_coefficients(c_, s);
  return out;
}

const std::vector<double>& Observable::cached_coefficients() const {
  if (!bound()) throw std::logic_error("observable is not bound to a spectrum");
  return coeffs_;
}

std::vector<double> Observable::coefficients(const Spectrum& s) const {
  if (bound()) {
    if (spectrum_id_ != s.id())
      throw std::logic_error("observable coefficients cached for a different spectrum");
    return coeffs_;
  }
  return spectral_coefficients(c_, s);
}

bool Observable::orthogonal_to_ones() const {
  double sum = 0.0;
  for (double x : c_) sum += x;
  return std::fabs(sum) < 1e-12 * std::max(1.0, norm2(c_));
}

ObservableSet::ObservableSet(std::vector<Observable> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw config_error("observable set needs at least one row");
  const int n = rows_.front().n();
  kernel_ = true;
  for (const auto& r : rows_) {
    if (r.n() != n) throw config_error("observable set rows must share the dimension");
    kernel_ = kernel_ && r.orthogonal_to_ones();
  }
}

Matrix centering_matrix(int n) {
  Matrix m(n, n, -1.0 / n);
  for (int i = 0; i < n; ++i) m(i, i) += 1.0;
  return m;
}

Matrix e_matrix(int n) {
  Matrix m = Matrix::identity(n);
  m(0, 0) = 0.0;
  return m;
}

Matrix complete_incidence(int n) {
  Matrix b(n * (n - 1) / 2, n);
  int row = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      b(row, i) = 1.0;
      b(row, j) = -1.0;
      ++row;
    }
  return b;
}

Matrix incidence(const WeightedGraph& g) {
  Matrix b(static_cast<int>(g.edges().size()), g.node_count());
  int row = 0;
  for (const auto& e : g.edges()) {
    b(row, e.i - 1) = 1.0;
    b(row, e.j - 1) = -1.0;
    ++row;
  }
  return b;
}

std::vector<double> spectral_coefficients(const std::vector<double>& c, const Spectrum& s) {
  if (static_cast<int>(c.size()) != s.n())
    throw config_error("spectral_coefficients: dimension mismatch");
  std::vector<double> out(c.size(), 0.0);
  for (int k = 0; k < s.n(); ++k) {
    double acc = 0.0;
    for (int r = 0; r < s.n(); ++r) acc += s.basis()(r, k) * c[r];
    out[k] = acc;
  }
  return out;
}

bool kernel_check(const ObservableSet& set, const Spectrum& s) {
  for (const auto& row : set.rows()) {
    const auto cq = row.coefficients(s);
    if (std::fabs(cq[0]) >= 1e-10) return false;
  }
  return true;
}

}  // namespace netrisk
