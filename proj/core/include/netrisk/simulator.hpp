#pragma once

#include <cstdint>
#include <vector>

#include "netrisk/dde.hpp"
#include "netrisk/graph.hpp"
#include "netrisk/observables.hpp"
#include "netrisk/risk.hpp"

namespace netrisk {

// Euler-Maruyama configuration for  dx = -L x(t - tau) dt + b dw.
// dt must divide tau exactly (integral delay index) and satisfy
// dt * lambda_n < 0.1. burn_in and decimation control the steady pool.
struct SimConfig {
  double dt = 0.0;           // 0 -> tau/100
  double horizon = 0.0;      // 0 -> burn_in + enough for `steady_samples`
  double burn_in = -1.0;     // < 0 -> 30/lambda_2
  double decimation = 0.0;   // steady pool spacing; 0 -> 5*tau
  int trajectories = 100;
  int steady_samples_per_trajectory = 0;  // 0 -> derive from horizon
  std::uint64_t base_seed = 1;
  std::vector<double> checkpoints;  // times for transient statistics
};

struct EnsembleStats {
  std::vector<double> checkpoint_times;
  Matrix mean;        // q x checkpoints
  Matrix variance;    // q x checkpoints (unbiased across trajectories)
  Matrix mean_se;     // q x checkpoints
  Matrix variance_se; // q x checkpoints
  std::vector<std::vector<double>> steady_pool;  // per observable row
  int trajectories = 0;
};

// One trajectory of the state vector, recorded at the checkpoint times and
// contributing decimated post-burn-in steady samples. Exposed mainly for
// determinism tests; ensemble_stats is the production entry point.
struct TrajectoryResult {
  Matrix checkpoint_outputs;            // q x checkpoints
  std::vector<std::vector<double>> steady;  // q rows
};

TrajectoryResult simulate_trajectory(const WeightedGraph& g, const RiskParams& p,
                                     const ObservableSet& obs, const HistoryFunction& h,
                                     const SimConfig& cfg, int trajectory_index);

// Runs cfg.trajectories independent trajectories (threaded; results are
// partition-invariant because every random draw is keyed by
// (base_seed, trajectory, step)).
EnsembleStats ensemble_stats(const WeightedGraph& g, const RiskParams& p, const ObservableSet& obs,
                             const HistoryFunction& h, const SimConfig& cfg);

// (1 - eps) empirical quantile of |samples| (order statistic, lower
// interpolation). Requires pool size >= 100/eps.
double empirical_var_risk(const std::vector<double>& pool, double eps);

// Two-sample Kolmogorov-Smirnov statistic and its (asymptotic) p-value.
double ks_statistic(std::vector<double> a, std::vector<double> b);
double ks_p_value(double statistic, std::size_t na, std::size_t nb);

}  // namespace netrisk
