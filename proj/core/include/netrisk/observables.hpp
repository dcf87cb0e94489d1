#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netrisk/graph.hpp"
#include "netrisk/matrix.hpp"

namespace netrisk {

enum class ObservableKind { DeviationFromAverage, Pairwise, NeighborAverage, AverageState, Custom };

// A scalar network observable y = c^T x. Immutable; optionally bound to one
// Spectrum, which caches the coefficients c^Q = Q^T c. Replaying cached
// coefficients against a different spectrum is a contract violation, detected
// through the spectrum identity token.
class Observable {
 public:
  static Observable deviation_from_average(int i, int n);
  static Observable pairwise(int i, int j, int n);
  static Observable neighbor_average_deviation(const WeightedGraph& g, int i);
  static Observable average_state(int n);
  static Observable custom(std::vector<double> c);

  ObservableKind kind() const { return kind_; }
  const std::vector<double>& vec() const { return c_; }
  int n() const { return static_cast<int>(c_.size()); }
  double norm() const { return norm2(c_); }
  std::string label() const { return label_; }

  Observable bound_to(const Spectrum& s) const;  // returns a copy with cached c^Q
  bool bound() const { return spectrum_id_ != 0; }
  std::uint64_t spectrum_id() const { return spectrum_id_; }
  const std::vector<double>& cached_coefficients() const;

  // c^Q for this observable under spectrum s: cached when bound (id-checked),
  // computed on the fly otherwise.
  std::vector<double> coefficients(const Spectrum& s) const;

  // 1^T c == 0 within 1e-12, equivalently c_1^Q == 0.
  bool orthogonal_to_ones() const;

 private:
  Observable(ObservableKind kind, std::vector<double> c, std::string label);
  ObservableKind kind_;
  std::vector<double> c_;
  std::string label_;
  std::uint64_t spectrum_id_ = 0;
  std::vector<double> coeffs_;
};

// Ordered rows of an output matrix C (q x n).
class ObservableSet {
 public:
  explicit ObservableSet(std::vector<Observable> rows);
  int q() const { return static_cast<int>(rows_.size()); }
  int n() const { return rows_.front().n(); }
  const std::vector<Observable>& rows() const { return rows_; }
  const Observable& row(int i) const { return rows_[i]; }
  bool kernel_condition() const { return kernel_; }  // every row has 1^T c = 0

 private:
  std::vector<Observable> rows_;
  bool kernel_;
};

// Structural matrices from the preliminaries: centering matrix M_n,
// E_n = diag(0, 1, ..., 1), and incidence matrices.
Matrix centering_matrix(int n);
Matrix e_matrix(int n);
Matrix complete_incidence(int n);                 // n(n-1)/2 rows, all pairs i<j
Matrix incidence(const WeightedGraph& g);         // one +-1 row per edge

std::vector<double> spectral_coefficients(const std::vector<double>& c, const Spectrum& s);

// True iff every row of C has |c_1^Q| < 1e-10, i.e. ones lies in ker(C) and
// the steady output covariance stays bounded.
bool kernel_check(const ObservableSet& set, const Spectrum& s);

}  // namespace netrisk
