#include "netrisk/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <thread>

#include "netrisk/errors.hpp"
#include "netrisk/rng.hpp"

namespace netrisk {

double CounterRng::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  while (true) {
    const double u = 2.0 * next_uniform() - 1.0;
    const double v = 2.0 * next_uniform() - 1.0;
    const double s = u * u + v * v;
    if (s >= 1.0 || s == 0.0) continue;
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }
}

namespace {

struct ResolvedConfig {
  double dt;
  int delay_steps;
  long long burn_steps;
  long long total_steps;
  long long decim_steps;
  int steady_per_traj;
  std::vector<long long> checkpoint_steps;
};

ResolvedConfig resolve(const WeightedGraph& g, const RiskParams& p, const SimConfig& cfg,
                       const Spectrum& s) {
  if (!(p.tau > 0.0)) throw config_error("simulator: tau must be positive");
  if (!(s.lambda_max() * p.tau < std::numbers::pi / 2.0))
    throw instability_error("simulator: tau >= stability margin");
  ResolvedConfig r;
  r.dt = cfg.dt > 0.0 ? cfg.dt : p.tau / 100.0;
  const double ratio = p.tau / r.dt;
  r.delay_steps = static_cast<int>(std::llround(ratio));
  if (r.delay_steps < 1 || std::fabs(ratio - r.delay_steps) > 1e-9 * ratio)
    throw config_error("simulator: dt must divide tau exactly");
  if (!(r.dt * s.lambda_max() < 0.1))
    throw config_error("simulator: dt * lambda_n must stay below 0.1");

  const double burn = cfg.burn_in >= 0.0 ? cfg.burn_in : 30.0 / s.lambda2();
  r.burn_steps = static_cast<long long>(std::ceil(burn / r.dt));
  const double decim = cfg.decimation > 0.0 ? cfg.decimation : 5.0 * p.tau;
  r.decim_steps = std::max<long long>(1, static_cast<long long>(std::llround(decim / r.dt)));

  double horizon = cfg.horizon;
  if (cfg.steady_samples_per_trajectory > 0) {
    r.steady_per_traj = cfg.steady_samples_per_trajectory;
    const double needed = burn + (r.steady_per_traj + 0.5) * (r.decim_steps * r.dt);
    horizon = std::max(horizon, needed);
  }
  if (horizon <= 0.0) horizon = burn + 100.0 * (r.decim_steps * r.dt);
  r.total_steps = static_cast<long long>(std::ceil(horizon / r.dt));

  if (cfg.steady_samples_per_trajectory <= 0)
    r.steady_per_traj =
        static_cast<int>((r.total_steps - r.burn_steps) / std::max<long long>(1, r.decim_steps));

  for (double t : cfg.checkpoints) {
    if (t < 0.0) throw config_error("simulator: checkpoint times must be nonnegative");
    const long long st = static_cast<long long>(std::llround(t / r.dt));
    r.checkpoint_steps.push_back(st);
    r.total_steps = std::max(r.total_steps, st);
  }
  return r;
}

}  // namespace

TrajectoryResult simulate_trajectory(const WeightedGraph& g, const RiskParams& p,
                                     const ObservableSet& obs, const HistoryFunction& h,
                                     const SimConfig& cfg, int trajectory_index) {
  const Spectrum s = Spectrum::compute(g.laplacian());
  const ResolvedConfig rc = resolve(g, p, cfg, s);
  const int n = g.node_count();
  if (h.n() != n || std::fabs(h.tau() - p.tau) > 1e-12 * p.tau)
    throw config_error("simulator: history does not match graph/tau");
  const Matrix lap = g.laplacian();
  const int q = obs.q();

  TrajectoryResult out;
  out.checkpoint_outputs = Matrix(q, static_cast<int>(rc.checkpoint_steps.size()));
  out.steady.assign(q, {});
  for (auto& pool : out.steady) pool.reserve(rc.steady_per_traj);

  // Circular buffer of the last delay_steps + 1 states.
  const int d = rc.delay_steps;
  std::vector<std::vector<double>> ring(d + 1, std::vector<double>(n));
  for (int m = -d; m <= 0; ++m) {
    const auto x = h.at(m * rc.dt);
    ring[(m + d) % (d + 1)] = x;
  }

  std::vector<double> x = h.at(0.0);
  const double noise_scale = p.b * std::sqrt(rc.dt);
  std::vector<double> drift(n);

  auto record = [&](long long step, const std::vector<double>& state) {
    for (std::size_t ci = 0; ci < rc.checkpoint_steps.size(); ++ci)
      if (rc.checkpoint_steps[ci] == step)
        for (int r = 0; r < q; ++r)
          out.checkpoint_outputs(r, static_cast<int>(ci)) = dot(obs.row(r).vec(), state);
    if (step > rc.burn_steps && (step - rc.burn_steps) % rc.decim_steps == 0 &&
        static_cast<int>(out.steady[0].size()) < rc.steady_per_traj)
      for (int r = 0; r < q; ++r) out.steady[r].push_back(dot(obs.row(r).vec(), state));
  };

  record(0, x);
  for (long long step = 0; step < rc.total_steps; ++step) {
    const auto& delayed = ring[(step % (d + 1))];  // state at step - d
    for (int r = 0; r < n; ++r) {
      double acc = 0.0;
      for (int cidx = 0; cidx < n; ++cidx) acc += lap(r, cidx) * delayed[cidx];
      drift[r] = acc;
    }
    CounterRng rng(cfg.base_seed, static_cast<std::uint64_t>(trajectory_index),
                   static_cast<std::uint64_t>(step));
    for (int r = 0; r < n; ++r) x[r] += -rc.dt * drift[r] + noise_scale * rng.next_normal();
    // Slot of the no-longer-needed state (step - d) receives state (step + 1).
    ring[step % (d + 1)] = x;
    record(step + 1, x);
  }
  return out;
}

EnsembleStats ensemble_stats(const WeightedGraph& g, const RiskParams& p, const ObservableSet& obs,
                             const HistoryFunction& h, const SimConfig& cfg) {
  const int traj_count = cfg.trajectories;
  if (traj_count < 1) throw config_error("simulator: needs at least one trajectory");
  const int q = obs.q();
  std::vector<TrajectoryResult> results(traj_count);

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(hw, traj_count);
  std::vector<std::thread> threads;
  std::atomic<int> next{0};
  std::exception_ptr first_error = nullptr;
  std::mutex error_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&]() {
      while (true) {
        const int idx = next.fetch_add(1);
        if (idx >= traj_count) break;
        try {
          results[idx] = simulate_trajectory(g, p, obs, h, cfg, idx);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);

  EnsembleStats stats;
  stats.trajectories = traj_count;
  const int ck = static_cast<int>(cfg.checkpoints.size());
  stats.checkpoint_times = cfg.checkpoints;
  stats.mean = Matrix(q, ck);
  stats.variance = Matrix(q, ck);
  stats.mean_se = Matrix(q, ck);
  stats.variance_se = Matrix(q, ck);
  for (int r = 0; r < q; ++r) {
    for (int c = 0; c < ck; ++c) {
      double m1 = 0.0;
      for (int t = 0; t < traj_count; ++t) m1 += results[t].checkpoint_outputs(r, c);
      m1 /= traj_count;
      double m2 = 0.0, m4 = 0.0;
      for (int t = 0; t < traj_count; ++t) {
        const double dv = results[t].checkpoint_outputs(r, c) - m1;
        m2 += dv * dv;
        m4 += dv * dv * dv * dv;
      }
      const double var = traj_count > 1 ? m2 / (traj_count - 1) : 0.0;
      m2 /= traj_count;
      m4 /= traj_count;
      stats.mean(r, c) = m1;
      stats.variance(r, c) = var;
      stats.mean_se(r, c) = std::sqrt(var / traj_count);
      // standard error of the sample variance from the 4th central moment
      const double var_of_var = std::max(0.0, m4 - m2 * m2) / traj_count;
      stats.variance_se(r, c) = std::sqrt(var_of_var);
    }
  }
  stats.steady_pool.assign(q, {});
  for (int r = 0; r < q; ++r)
    for (int t = 0; t < traj_count; ++t)
      stats.steady_pool[r].insert(stats.steady_pool[r].end(), results[t].steady[r].begin(),
                                  results[t].steady[r].end());
  return stats;
}

double empirical_var_risk(const std::vector<double>& pool, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw config_error("empirical_var_risk: eps in (0,1)");
  if (static_cast<double>(pool.size()) < 100.0 / eps)
    throw config_error("empirical_var_risk: pool too small (need >= 100/eps samples)");
  std::vector<double> abs_sorted(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) abs_sorted[i] = std::fabs(pool[i]);
  std::sort(abs_sorted.begin(), abs_sorted.end());
  const double target = (1.0 - eps) * static_cast<double>(abs_sorted.size());
  long long idx = static_cast<long long>(std::ceil(target)) - 1;
  idx = std::max<long long>(0, std::min<long long>(idx, abs_sorted.size() - 1));
  return abs_sorted[static_cast<std::size_t>(idx)];
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    const double fa = static_cast<double>(i) / a.size();
    const double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::fabs(fa - fb));
  }
  return d;
}

double ks_p_value(double statistic, std::size_t na, std::size_t nb) {
  const double ne = static_cast<double>(na) * nb / (na + nb);
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * statistic;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::fabs(term) < 1e-12) break;
  }
  return std::min(1.0, std::max(0.0, sum));
}

}  // namespace netrisk
